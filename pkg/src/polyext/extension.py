"""The lifted polyhedron Q = {(x, y) : A x + T y = b, y >= 0} and checks that it projects onto P."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import InvalidInput, LiftFailure
from .lp import LPProblem, solve
from .polytope import LinearSystemH, PointVec
from .scalars import FLOAT64, RATIONAL, Mode, max_abs, same_mode, zeros
from .slack import NonnegFactorization, slack_matrix, verify_factorization

LIFT_TOL = 1e-9
PROJECTION_TOL = 1e-7


@dataclass(frozen=True, eq=False)
class ExtendedSystem:
    A: np.ndarray
    T: np.ndarray
    b: np.ndarray
    mode: Mode
    A_eq: np.ndarray | None = None
    b_eq: np.ndarray | None = None

    @property
    def d(self) -> int:
        return self.A.shape[1]

    @property
    def r(self) -> int:
        return self.T.shape[1]

    @property
    def facet_bound(self) -> int:
        """Q has at most r facets: the only inequalities are y >= 0."""
        return self.r

    def constraint_matrix(self) -> tuple[np.ndarray, np.ndarray]:
        """Equations over (x, y): the facet rows, then the affine-hull rows with y-part zero."""
        M = np.concatenate([self.A, self.T], axis=1)
        rhs = self.b
        if self.A_eq is not None:
            extra = np.concatenate(
                [self.A_eq, zeros((self.A_eq.shape[0], self.r), self.mode)], axis=1
            )
            M = np.concatenate([M, extra], axis=0)
            rhs = np.concatenate([rhs, self.b_eq])
        return M, rhs


def build_extension(
    H: LinearSystemH,
    F: NonnegFactorization,
    vertices=None,
    rel_tol: float = 1e-9,
) -> ExtendedSystem:
    """Assemble Q from a facet system and a factorization of its slack matrix.

    When ``vertices`` are given the factorization is re-verified against them.
    """
    same_mode(H.mode, F.mode)
    if F.T.shape[0] != H.m:
        raise InvalidInput(f"T has {F.T.shape[0]} rows, the system has {H.m} facets")
    if vertices is not None:
        S = slack_matrix(H, vertices)
        if S.shape[1] != F.U.shape[1]:
            raise InvalidInput("U has the wrong number of columns for these vertices")
        if not verify_factorization(S, F, rel_tol).passed:
            raise InvalidInput("the factorization does not reproduce the slack matrix")
    return ExtendedSystem(H.A, F.T, H.b, H.mode, H.A_eq, H.b_eq)


def lift_vertex(
    j: int, F: NonnegFactorization, H: LinearSystemH, V
) -> PointVec:
    """The point (v_j, U^j) of Q lying over vertex j."""
    same_mode(F.mode, H.mode)
    v = V[j]
    vx = v.as_array() if isinstance(v, PointVec) else np.asarray(v)
    y = F.U[:, j]
    resid = H.b - H.A.dot(vx) - F.T.dot(y)
    if H.mode == RATIONAL:
        bad = any(r != 0 for r in resid) or any(v < 0 for v in y)
        if H.A_eq is not None:
            bad = bad or any(r != 0 for r in H.b_eq - H.A_eq.dot(vx))
    else:
        tol = LIFT_TOL * max(max_abs(H.b), 1.0)
        bad = max_abs(resid) > tol or bool(np.any(y < 0))
        if H.A_eq is not None:
            bad = bad or max_abs(H.b_eq - H.A_eq @ vx) > tol
    if bad:
        raise LiftFailure(f"vertex {j} does not lift into Q (residual {max_abs(resid)})")
    return PointVec(tuple(vx) + tuple(y), H.mode)


@dataclass
class ProjectionReport:
    optima: list
    excess: object  # max_i (opt_i - b_i); <= 0 means pi(Q) lies in P
    gap: object  # max_i |opt_i - b_i|; 0 means every facet is attained
    tolerance: object
    contained: bool
    tight: bool
    statuses: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.contained and self.tight

    def to_json(self) -> dict:
        mode = RATIONAL if isinstance(self.tolerance, (int, Fraction)) else FLOAT64
        enc = (lambda v: None if v is None else str(Fraction(v))) if mode == RATIONAL else (
            lambda v: None if v is None else float(v)
        )
        return {
            "optima": [enc(v) for v in self.optima],
            "excess": enc(self.excess),
            "gap": enc(self.gap),
            "tolerance": enc(self.tolerance),
            "contained": self.contained,
            "tight": self.tight,
            "statuses": self.statuses,
            "pass": self.passed,
        }


def check_projection_inclusion(Q: ExtendedSystem, H: LinearSystemH) -> ProjectionReport:
    """Maximize each facet functional A_i x over Q.

    Every optimum must stay at most b_i (projection inside P) and reach b_i
    (the facet is attained), exactly or within ``1e-7 * max|b|`` in float mode.
    """
    same_mode(Q.mode, H.mode)
    M, rhs = Q.constraint_matrix()
    d, r = Q.d, Q.r
    lo = [None] * d + [0] * r
    hi = [None] * (d + r)
    exact = Q.mode == RATIONAL
    tol = 0 if exact else PROJECTION_TOL * max(max_abs(H.b), 1.0)
    optima, statuses = [], []
    excess = gap = None
    contained = tight = True
    for i in range(H.m):
        c = list(H.A[i]) + [0] * r
        prob = LPProblem(M, list(rhs), list(rhs), lo, hi, c, "maximize", Q.mode)
        res = solve(prob)
        statuses.append(res.status)
        if res.status != "optimal":
            optima.append(None)
            contained = tight = False
            continue
        optima.append(res.value)
        diff = res.value - H.b[i]
        excess = diff if excess is None else max(excess, diff)
        gap = abs(diff) if gap is None else max(gap, abs(diff))
        if diff > tol:
            contained = False
        if abs(diff) > tol:
            tight = False
    return ProjectionReport(optima, excess, gap, tol, contained, tight, statuses)
