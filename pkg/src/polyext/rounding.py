"""Round an extension of an integral polygon to small grid coefficients and check
that a box-LP membership test still recovers exactly its lattice points.

Everything here is exact.  The factor T may carry implicit square-root scales
(see ``NonnegFactorization.scale_sq``); rounding handles them through integer
square roots, so no irrational number is ever evaluated.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .exactla import det, exact_rank, gram_det
from .errors import DegenerateInput, InvalidInput, ModeMismatch, TooLarge
from .lp import LPProblem, solve
from .polytope import LinearSystemH, PolygonV
from .scalars import RATIONAL, max_abs, round_sqrt
from .slack import NonnegFactorization, SlackMatrix, normalize_pair

EXHAUSTIVE_LIMIT = 10**5
ENUMERATION_CAP = 10**6


def compute_delta(d: int, N: int) -> int:
    """((d + 1) N)^d."""
    if d < 2 or N < 2:
        raise InvalidInput(f"need d >= 2 and N >= 2, got d={d}, N={N}")
    return ((d + 1) * N) ** d


def check_coefficient_bounds(H: LinearSystemH, delta: int, S: SlackMatrix | None = None) -> bool:
    """All |A|, |b| <= delta, and every slack <= delta^2 when S is given."""
    if H.mode != RATIONAL:
        raise ModeMismatch("coefficient bounds are checked on integral systems only")
    if max_abs(H.A) > delta or max_abs(H.b) > delta:
        return False
    return S is None or max_abs(S.to_array()) <= delta * delta


# --- row selection ---------------------------------------------------------


@dataclass
class Selection:
    rows: tuple[int, ...]
    volume_sq: Fraction
    exhaustive: bool


def select_max_volume_rows(M, k: int | None = None) -> Selection:
    """Choose k rows of M spanning the largest parallelepiped (Gram determinant).

    Small instances are searched exhaustively; larger ones use a greedy start
    followed by single-row swaps until no swap increases the volume.
    """
    M = np.asarray(M, dtype=object)
    m = M.shape[0]
    if k is None:
        k = exact_rank(M)
    if k <= 0 or k > m:
        raise DegenerateInput(f"cannot select {k} rows out of {m}")
    if math.comb(m, k) <= EXHAUSTIVE_LIMIT:
        best, best_I = Fraction(0), None
        for I in itertools.combinations(range(m), k):
            v = gram_det(M, I)
            if v > best:
                best, best_I = v, I
        if best_I is None:
            raise DegenerateInput("every row subset of that size is degenerate")
        return Selection(best_I, best, True)

    I: list[int] = []
    for _ in range(k):
        cand = [(i, gram_det(M, I + [i])) for i in range(m) if i not in I]
        i, v = max(cand, key=lambda t: (t[1], -t[0]))
        if v == 0:
            raise DegenerateInput("rows do not span a space of the requested dimension")
        I.append(i)
    vol = gram_det(M, I)
    improved = True
    while improved:
        improved = False
        for pos in range(k):
            for i in range(m):
                if i in I:
                    continue
                J = I[:pos] + [i] + I[pos + 1 :]
                v = gram_det(M, J)
                if v > vol:
                    I, vol, improved = J, v, True
    return Selection(tuple(sorted(I)), vol, False)


def expansion_coefficients(M, I) -> list[list[Fraction]]:
    """For every row of M, its coefficients in the basis of rows I."""
    M = np.asarray(M, dtype=object)
    k = len(I)
    basis = [[Fraction(v) for v in M[i]] for i in I]
    # pick k columns on which the basis is invertible
    cols: list[int] = []
    for c in range(M.shape[1]):
        trial = cols + [c]
        sub = [[row[j] for j in trial] for row in basis]
        if exact_rank(np.array(sub, dtype=object)) == len(trial):
            cols = trial
            if len(cols) == k:
                break
    if len(cols) < k:
        raise DegenerateInput("selected rows are linearly dependent")
    B = [[basis[l][c] for c in cols] for l in range(k)]
    out = []
    for row in M:
        target = [Fraction(row[c]) for c in cols]
        # solve lam^T B = target by Cramer's rule
        base = det(B)
        lam = []
        for l in range(k):
            Bl = [list(r) for r in B]
            Bl[l] = target
            lam.append(det(Bl) / base)
        out.append(lam)
    return out


def max_expansion_coefficient(M, I) -> Fraction:
    return max(abs(v) for lam in expansion_coefficients(M, I) for v in lam)


# --- rounding ----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class RoundedSystem:
    """Rows of (A_bar, T_bar, b_bar); T_bar is stored as integer numerators
    over the common denominator ``grid``."""

    A_bar: np.ndarray
    T_num: np.ndarray
    b_bar: np.ndarray
    Delta: int
    d: int
    r: int
    rows: tuple[int, ...] = field(default=())

    @property
    def grid(self) -> int:
        return 4 * self.r * (self.d + self.r) * self.Delta

    @property
    def epsilon(self) -> Fraction:
        return Fraction(1, 4 * (self.d + self.r))

    @property
    def T_bar(self) -> np.ndarray:
        g = self.grid
        out = np.empty(self.T_num.shape, dtype=object)
        for idx, v in np.ndenumerate(self.T_num):
            out[idx] = Fraction(v, g) if v % g else v // g
        return out

    def invariants(self) -> dict[str, bool]:
        n_rows = self.d + self.r
        return {
            "row_count": self.A_bar.shape[0] == n_rows == self.T_num.shape[0] == len(self.b_bar),
            "A_bound": max_abs(self.A_bar) <= self.Delta,
            "b_bound": max_abs(self.b_bar) <= self.Delta,
            "T_bound": max_abs(self.T_num) <= self.Delta * self.grid,
            "T_nonnegative": all(v >= 0 for v in self.T_num.flat),
            "A_integral": all(isinstance(v, int) for v in self.A_bar.flat),
            "b_integral": all(isinstance(v, int) for v in self.b_bar),
        }


def _scaled_entry_num(t, s, grid: int) -> int:
    """Nearest integer to grid * t * sqrt(s), with t >= 0."""
    t = Fraction(t)
    if t == 0:
        return 0
    return round_sqrt(grid * grid * t * t * Fraction(s))


def round_system(
    H: LinearSystemH,
    F: NonnegFactorization,
    I,
    Delta: int,
) -> RoundedSystem:
    """Keep rows I of (A, T, b), round the normalized T to the grid 1/(4r(d+r)Delta),
    and pad with zero rows to d + r rows.

    ``F`` must already be normalized (``normalize_pair``) and bounded by Delta.
    """
    if H.mode != RATIONAL or F.mode != RATIONAL:
        raise ModeMismatch("rounding runs in exact arithmetic")
    if H.A_eq is not None:
        raise InvalidInput("systems with equations are not supported here")
    d, r = H.d, F.r
    if F.T.shape[0] != H.m:
        raise InvalidInput("T and the system have different row counts")
    if len(I) > d + r:
        raise InvalidInput(f"{len(I)} rows selected but only d + r = {d + r} allowed")
    if any(not isinstance(v, int) for v in list(H.A.flat) + list(H.b)):
        raise InvalidInput("A and b must be integral")
    scales = F.scales()
    D2 = Delta * Delta
    for l, s in enumerate(scales):
        tl = Fraction(max_abs(F.T[:, l]))
        if tl * tl * s > D2 or Fraction(max_abs(F.U[l])) ** 2 / s > D2:
            raise InvalidInput(f"component {l} exceeds the coefficient bound {Delta}")
    grid = 4 * r * (d + r) * Delta
    A_bar = np.empty((d + r, d), dtype=object)
    A_bar.fill(0)
    T_num = np.empty((d + r, r), dtype=object)
    T_num.fill(0)
    b_bar = np.empty(d + r, dtype=object)
    b_bar.fill(0)
    for pos, i in enumerate(I):
        A_bar[pos] = H.A[i]
        b_bar[pos] = H.b[i]
        for l in range(r):
            T_num[pos, l] = _scaled_entry_num(F.T[i, l], scales[l], grid)
    return RoundedSystem(A_bar, T_num, b_bar, Delta, d, r, tuple(I))


def rounding_error_ok(R: RoundedSystem, F: NonnegFactorization) -> bool:
    """|T_bar - T_I| <= half a grid step for every entry, checked by squaring."""
    g = R.grid
    scales = F.scales()
    for pos, i in enumerate(R.rows):
        for l in range(R.r):
            t = Fraction(F.T[i, l])
            exact_sq = g * g * t * t * Fraction(scales[l])  # (grid * true entry)^2
            num = R.T_num[pos, l]
            lo, hi = Fraction(2 * num - 1, 2), Fraction(2 * num + 1, 2)
            if not (max(lo, 0) ** 2 <= exact_sq <= hi * hi):
                return False
    return True


def prepare_rounded_system(
    H: LinearSystemH, F: NonnegFactorization, Delta: int
) -> tuple[RoundedSystem, Selection, NonnegFactorization]:
    """Normalize F, pick max-volume rows of (A, T), and round."""
    Fn = normalize_pair(F)
    # column scaling does not change which rows maximize volume, so select on
    # the stored rational rows
    M = np.concatenate([H.A, Fn.T], axis=1)
    sel = select_max_volume_rows(M)
    return round_system(H, Fn, sel.rows, Delta), sel, Fn


# --- membership --------------------------------------------------------------


def membership_test(R: RoundedSystem, x) -> bool:
    """Is there y in [0, Delta]^r with |A_bar x + T_bar y - b_bar| <= epsilon?

    The rows are multiplied by the grid so the LP has integer data; epsilon
    becomes ``r * Delta``.
    """
    if len(x) != R.d:
        raise InvalidInput(f"point has dimension {len(x)}, expected {R.d}")
    g = R.grid
    tol = R.r * R.Delta  # grid * epsilon
    rows, lo, hi = [], [], []
    for i in range(R.d + R.r):
        resid = g * (R.b_bar[i] - sum(int(a) * int(v) for a, v in zip(R.A_bar[i], x)))
        if all(v == 0 for v in R.T_num[i]):
            if abs(resid) > tol:
                return False
            continue
        rows.append(list(R.T_num[i]))
        lo.append(resid - tol)
        hi.append(resid + tol)
    if not rows:
        return True
    prob = LPProblem(rows, lo, hi, [0] * R.r, [R.Delta] * R.r, sense="feasibility", mode=RATIONAL)
    return solve(prob).status == "optimal"


@dataclass
class RecoveryReport:
    points_checked: int
    disagreements: list = field(default_factory=list)
    members: int = 0

    @property
    def passed(self) -> bool:
        return not self.disagreements

    def to_json(self) -> dict:
        return {
            "points_checked": self.points_checked,
            "members": self.members,
            "disagreements": [list(p) for p in self.disagreements],
            "pass": self.passed,
        }


def bounding_box(P: PolygonV) -> list[tuple[int, int]]:
    arr = P.as_array()
    return [
        (math.floor(min(arr[:, c])), math.ceil(max(arr[:, c]))) for c in range(arr.shape[1])
    ]


def verify_recovery(
    R: RoundedSystem, H: LinearSystemH, box: list[tuple[int, int]]
) -> RecoveryReport:
    """Compare ``membership_test`` with exact membership in H at every lattice
    point of ``box`` (inclusive integer ranges, one per coordinate)."""
    total = 1
    for lo, hi in box:
        total *= max(0, hi - lo + 1)
    if total > ENUMERATION_CAP:
        raise TooLarge(f"{total} lattice points exceed the cap {ENUMERATION_CAP}")
    rep = RecoveryReport(total)
    for x in itertools.product(*(range(lo, hi + 1) for lo, hi in box)):
        inside = H.contains(list(x))
        got = membership_test(R, x)
        rep.members += got
        if got != inside:
            rep.disagreements.append(x)
    return rep
