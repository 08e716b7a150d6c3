"""Dense bounded-variable primal simplex with Bland's rule.

Rational problems are solved in exact arithmetic; Bland's rule then
guarantees termination.  Float problems use the same code with small pivot
and feasibility tolerances and an iteration cap.

Internally every row becomes an equation ``A_i x - s_i = 0`` with a bounded
row variable ``s_i``, and phase 1 starts from one artificial per row.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal, Sequence

import numpy as np

from .errors import InvalidInput, NumericalFailure
from .scalars import FLOAT64, RATIONAL, Mode, as_matrix, check_mode, to_scalar

Sense = Literal["maximize", "feasibility"]
Status = Literal["optimal", "infeasible", "unbounded"]

PIVOT_TOL = 1e-11
COST_TOL = 1e-10
FEAS_TOL = 1e-9
CHECK_TOL = 1e-8


@dataclass
class LPProblem:
    """``row_lo <= A x <= row_hi``, ``lo <= x <= hi``; None means unbounded.

    Use :meth:`from_rows` for the usual ``<=, ==, >=`` form.
    """

    A: np.ndarray
    row_lo: list
    row_hi: list
    lo: list
    hi: list
    c: list | None = None
    sense: Sense = "maximize"
    mode: Mode = RATIONAL

    def __post_init__(self):
        check_mode(self.mode)
        self.A = as_matrix(self.A, self.mode) if np.asarray(self.A).size else np.zeros(
            (len(self.row_lo), len(self.lo)), dtype=object if self.mode == RATIONAL else float
        )
        m, n = self.A.shape
        if len(self.row_lo) != m or len(self.row_hi) != m:
            raise InvalidInput("row bounds do not match the number of rows")
        if len(self.lo) != n or len(self.hi) != n:
            raise InvalidInput("variable bounds do not match the number of columns")
        conv = lambda v: None if v is None else to_scalar(v, self.mode)  # noqa: E731
        self.row_lo = [conv(v) for v in self.row_lo]
        self.row_hi = [conv(v) for v in self.row_hi]
        self.lo = [conv(v) for v in self.lo]
        self.hi = [conv(v) for v in self.hi]
        if self.sense not in ("maximize", "feasibility"):
            raise InvalidInput(f"unknown sense {self.sense!r}")
        if self.sense == "maximize":
            if self.c is None or len(self.c) != n:
                raise InvalidInput("objective has the wrong length")
            self.c = [to_scalar(v, self.mode) for v in self.c]

    @classmethod
    def from_rows(
        cls,
        A,
        senses: Sequence[str],
        b,
        *,
        lo=None,
        hi=None,
        c=None,
        sense: Sense = "maximize",
        mode: Mode = RATIONAL,
    ) -> "LPProblem":
        """Rows ``A_i x (<=|==|>=) b_i``; variables default to ``x >= 0``."""
        A = as_matrix(A, mode)
        m, n = A.shape
        row_lo, row_hi = [], []
        for op, bi in zip(senses, b):
            if op == "<=":
                row_lo.append(None), row_hi.append(bi)
            elif op in ("==", "="):
                row_lo.append(bi), row_hi.append(bi)
            elif op == ">=":
                row_lo.append(bi), row_hi.append(None)
            else:
                raise InvalidInput(f"unknown row sense {op!r}")
        if len(row_lo) != m:
            raise InvalidInput("senses/b do not match the number of rows")
        lo = [0] * n if lo is None else list(lo)
        hi = [None] * n if hi is None else list(hi)
        return cls(A, row_lo, row_hi, lo, hi, c, sense, mode)


@dataclass
class LPResult:
    status: Status
    value: object = None
    x: list | None = None
    iterations: int = 0
    history: list = field(default_factory=list)


class _Tableau:
    def __init__(self, prob: LPProblem, debug: bool):
        self.exact = prob.mode == RATIONAL
        self.zero = 0 if self.exact else 0.0
        A = prob.A
        m, n = A.shape
        self.m, self.n = m, n
        # columns: x (n) | s (m) | artificial (m)
        N = n + 2 * m
        self.N = N
        self.lo = list(prob.lo) + list(prob.row_lo) + [self.zero] * m
        self.hi = list(prob.hi) + list(prob.row_hi) + [None] * m
        for j in range(n + m):
            if self.lo[j] is not None and self.hi[j] is not None and self.lo[j] > self.hi[j]:
                self.trivially_infeasible = True
                return
        self.trivially_infeasible = False

        val = [self.zero] * N
        for j in range(n + m):
            if self.lo[j] is not None:
                val[j] = self.lo[j]
            elif self.hi[j] is not None:
                val[j] = self.hi[j]

        tab = [[self.zero] * N for _ in range(m)]
        basis = []
        for i in range(m):
            row = tab[i]
            resid = self.zero
            for j in range(n):
                a = A[i, j]
                row[j] = a
                resid += a * val[j]
            row[n + i] = -1 if self.exact else -1.0
            resid -= val[n + i]
            # row i reads M_i z + sigma * a_i = 0, so a_i = -resid / sigma >= 0
            sigma = -1 if resid > 0 else 1
            if sigma == -1:
                for j in range(n + m):
                    row[j] = -row[j]
            row[n + m + i] = 1 if self.exact else 1.0
            val[n + m + i] = abs(resid)
            basis.append(n + m + i)
        self.tab = tab
        self.val = val
        self.basis = basis
        self.is_basic = [False] * N
        for j in basis:
            self.is_basic[j] = True
        self.iterations = 0
        self.debug = debug
        self.history: list = []

    def reduced_costs(self, cost):
        d = list(cost)
        for i, bj in enumerate(self.basis):
            cb = cost[bj]
            if cb:
                row = self.tab[i]
                for j in range(self.N):
                    if row[j]:
                        d[j] -= cb * row[j]
        return d

    def _div(self, a, b):
        return Fraction(a) / b if self.exact else a / b

    def _positive(self, v):
        return v > 0 if self.exact else v > COST_TOL

    def _negative(self, v):
        return v < 0 if self.exact else v < -COST_TOL

    def _nonzero_pivot(self, v):
        return v != 0 if self.exact else abs(v) > PIVOT_TOL

    def run(self, cost, max_iter: int | None) -> str:
        d = self.reduced_costs(cost)
        seen = set()
        while True:
            if max_iter is not None and self.iterations >= max_iter:
                raise NumericalFailure(f"simplex hit the iteration cap ({max_iter})")
            if self.debug:
                at_hi = frozenset(
                    j for j in range(self.N)
                    if not self.is_basic[j] and self.hi[j] is not None and self.val[j] == self.hi[j]
                    and self.lo[j] != self.hi[j]
                )
                state = (tuple(sorted(self.basis)), at_hi)
                if state in seen:
                    raise NumericalFailure("basis repeated: the simplex cycled")
                seen.add(state)
                self.history.append(state)

            enter, direction = None, 0
            for j in range(self.N):
                if self.is_basic[j]:
                    continue
                dj = d[j]
                if self._positive(dj) and (self.hi[j] is None or self.val[j] < self.hi[j]):
                    enter, direction = j, 1
                    break
                if self._negative(dj) and (self.lo[j] is None or self.val[j] > self.lo[j]):
                    enter, direction = j, -1
                    break
            if enter is None:
                return "optimal"

            # ratio test; ties go to the smallest variable index (Bland)
            best_t, best_var, best_row = None, None, None
            if self.lo[enter] is not None and self.hi[enter] is not None:
                best_t, best_var = self.hi[enter] - self.lo[enter], enter
            for i, bj in enumerate(self.basis):
                a = self.tab[i][enter]
                if not self._nonzero_pivot(a):
                    continue
                rate = -a * direction
                if rate < 0:
                    if self.lo[bj] is None:
                        continue
                    t = self._div(self.val[bj] - self.lo[bj], -rate)
                else:
                    if self.hi[bj] is None:
                        continue
                    t = self._div(self.hi[bj] - self.val[bj], rate)
                if not self.exact and t < 0:
                    t = 0.0
                if best_t is None or t < best_t or (t == best_t and bj < best_var):
                    best_t, best_var, best_row = t, bj, i
            if best_t is None:
                return "unbounded"

            step = best_t * direction
            self.val[enter] += step
            for i, bj in enumerate(self.basis):
                a = self.tab[i][enter]
                if a:
                    self.val[bj] -= a * step
            self.iterations += 1
            if best_row is None:
                # bound flip of the entering variable
                self.val[enter] = self.hi[enter] if direction > 0 else self.lo[enter]
                continue
            leaving = self.basis[best_row]
            rate = -self.tab[best_row][enter] * direction
            self.val[leaving] = self.lo[leaving] if rate < 0 else self.hi[leaving]
            self._pivot(best_row, enter, d)

    def _pivot(self, r, c, d):
        row = self.tab[r]
        piv = row[c]
        if self.exact:
            inv = Fraction(1) / piv
            row[:] = [_norm(v * inv) if v else 0 for v in row]
        else:
            row[:] = [v / piv for v in row]
        nz = [j for j in range(self.N) if row[j]]
        for i in range(self.m):
            if i == r:
                continue
            f = self.tab[i][c]
            if f:
                other = self.tab[i]
                for j in nz:
                    other[j] -= f * row[j]
                other[c] = self.zero
                if self.exact:
                    other[:] = [_norm(v) for v in other]
        f = d[c]
        if f:
            for j in nz:
                d[j] -= f * row[j]
            d[c] = self.zero
        self.is_basic[self.basis[r]] = False
        self.basis[r] = c
        self.is_basic[c] = True


def _norm(v):
    if type(v) is Fraction and v.denominator == 1:
        return v.numerator
    return v


def solve(prob: LPProblem, *, max_iter: int | None = None, debug: bool = False) -> LPResult:
    """Maximize ``c x`` (or only find a feasible point) subject to the bounds.

    Float problems default to an iteration cap of ``50 * (m + n) + 1000``.
    """
    tab = _Tableau(prob, debug)
    if tab.trivially_infeasible:
        return LPResult("infeasible")
    if prob.mode == FLOAT64 and max_iter is None:
        max_iter = 50 * (tab.m + tab.n) + 1000
    m, n = tab.m, tab.n
    one = 1 if tab.exact else 1.0

    phase1 = [tab.zero] * (n + m) + [-one] * m
    tab.run(phase1, max_iter)
    infeas = sum(tab.val[n + m + i] for i in range(m))
    scale = max([one] + [abs(v) for v in tab.val[: n + m]])
    if (infeas > 0) if tab.exact else (infeas > FEAS_TOL * scale):
        return LPResult("infeasible", iterations=tab.iterations, history=tab.history)
    for i in range(m):
        tab.hi[n + m + i] = tab.zero
        if not tab.is_basic[n + m + i]:
            tab.val[n + m + i] = tab.zero

    if prob.sense == "maximize":
        phase2 = list(prob.c) + [tab.zero] * (2 * m)
        status = tab.run(phase2, max_iter)
        if status == "unbounded":
            return LPResult("unbounded", iterations=tab.iterations, history=tab.history)

    x = tab.val[:n]
    if tab.exact:
        x = [_norm(Fraction(v)) if not isinstance(v, int) else v for v in x]
    _check_point(prob, x)
    value = sum((ci * xi for ci, xi in zip(prob.c, x)), tab.zero) if prob.sense == "maximize" else tab.zero
    return LPResult("optimal", value, x, tab.iterations, tab.history)


def _check_point(prob: LPProblem, x):
    tol = 0 if prob.mode == RATIONAL else CHECK_TOL
    act = prob.A.dot(np.array(x, dtype=prob.A.dtype)) if prob.A.size else [0] * len(prob.row_lo)
    for i, a in enumerate(act):
        lo, hi = prob.row_lo[i], prob.row_hi[i]
        if (lo is not None and a < lo - tol) or (hi is not None and a > hi + tol):
            raise NumericalFailure(f"returned point violates row {i}")
    for j, v in enumerate(x):
        lo, hi = prob.lo[j], prob.hi[j]
        if (lo is not None and v < lo - tol) or (hi is not None and v > hi + tol):
            raise NumericalFailure(f"returned point violates the bounds of variable {j}")
