"""Folding a regular n-gon onto its first vertex with O(log n) conditional reflections.

Each symmetry axis contributes two columns to the left factor and two rows to
the right factor; the entries are sqrt(2) times distances to the axis, so the
slack matrix factors with rank 2 * ceil(log2 n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import FoldingDivergence, InvalidSize
from .polytope import make_regular_ngon, polygon_to_hrep
from .slack import NonnegFactorization, SlackMatrix, slack_matrix

ON_AXIS_TOL = 1e-12
TERMINAL_TOL = 1e-9
SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class FoldAxis:
    """Line through the origin with unit normal oriented towards v_1."""

    index: int
    normal: tuple[float, float]
    k: int  # the value of the halving counter that produced this axis

    def side(self, x) -> float:
        return self.normal[0] * x[0] + self.normal[1] * x[1]

    def distance(self, x) -> float:
        return abs(self.side(x))


@dataclass(frozen=True)
class FoldingSequence:
    points: tuple  # q+1 two-vectors
    side_flags: tuple  # q booleans, True when no reflection happened


def _vertex(n: int, j: int) -> np.ndarray:
    """v_j (1-based) of the unit-circumradius n-gon."""
    t = 2 * math.pi * (j - 1) / n
    return np.array([math.cos(t), math.sin(t)])


def folding_axes(n: int) -> list[FoldAxis]:
    """Symmetry axes through the midpoint of v_ceil(k/2) and v_ceil((k+1)/2),
    halving k from n until it reaches 1."""
    if n < 3:
        raise InvalidSize(f"n must be >= 3, got {n}")
    v1 = _vertex(n, 1)
    axes = []
    k = n
    while k > 1:
        mid = (_vertex(n, -(-k // 2)) + _vertex(n, -(-(k + 1) // 2))) / 2
        direction = mid / np.linalg.norm(mid)
        normal = np.array([-direction[1], direction[0]])
        s = float(normal @ v1)
        if abs(s) <= ON_AXIS_TOL:
            raise FoldingDivergence(f"v_1 lies on axis {len(axes)}")
        if s < 0:
            normal = -normal
        axes.append(FoldAxis(len(axes), (float(normal[0]), float(normal[1])), k))
        k = (k + 1) // 2
    return axes


def fold_count(n: int) -> int:
    """Number of halving steps k -> floor((k+1)/2) from n down to 1."""
    q, k = 0, n
    while k > 1:
        k = (k + 1) // 2
        q += 1
    return q


def conditional_reflect(x, axis: FoldAxis):
    """Reflect x across the axis unless it already lies in the closed side of v_1.

    Returns ``(point, flag)`` with flag True when x was left alone.
    """
    x = np.asarray(x, dtype=float)
    s = axis.side(x)
    if s >= -ON_AXIS_TOL:
        return x.copy(), True
    nrm = np.asarray(axis.normal)
    return x - 2 * s * nrm, False


def _fold(x, axes) -> FoldingSequence:
    pts = [np.asarray(x, dtype=float)]
    flags = []
    for ax in axes:
        y, flag = conditional_reflect(pts[-1], ax)
        pts.append(y)
        flags.append(flag)
    return FoldingSequence(tuple(tuple(map(float, p)) for p in pts), tuple(flags))


def vertex_folding_sequence(v, axes: list[FoldAxis]) -> FoldingSequence:
    """Fold a vertex of the unit n-gon; the last point must be v_1 = (1, 0)."""
    seq = _fold(v, axes)
    if np.abs(np.asarray(seq.points[-1]) - (1.0, 0.0)).max() > TERMINAL_TOL:
        raise FoldingDivergence(f"vertex {tuple(v)} folds to {seq.points[-1]}, not v_1")
    return seq


def terminal_facet_normals(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Normals (b = 1 scaling) of the facets [v_1, v_2] and [v_n, v_1]."""
    H = polygon_to_hrep(make_regular_ngon(n))
    return H.A[0], H.A[n - 1]


def facet_folding_sequence(a, beta: float, axes: list[FoldAxis], n: int | None = None) -> FoldingSequence:
    """Fold a facet normal.  Reflections fix the origin, so ``beta`` never changes.

    With ``n`` given, the last normal is checked against the two facets through v_1.
    """
    seq = _fold(a, axes)
    if n is not None:
        last = np.asarray(seq.points[-1])
        e12, en1 = terminal_facet_normals(n)
        if min(np.abs(last - e12).max(), np.abs(last - en1).max()) > TERMINAL_TOL:
            raise FoldingDivergence(f"facet normal {tuple(a)} folds to {tuple(last)}")
    return seq


def _fold_all(X: np.ndarray, axes) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Fold every row of X at once.

    Returns the final points and two (len(X), q) arrays: distances to each
    axis and whether the point was strictly on the far side (reflected).
    """
    X = X.astype(float).copy()
    q = len(axes)
    dist = np.empty((X.shape[0], q))
    refl = np.empty((X.shape[0], q), dtype=bool)
    for i, ax in enumerate(axes):
        nrm = np.asarray(ax.normal)
        s = X @ nrm
        out = s < -ON_AXIS_TOL
        dist[:, i] = np.abs(s)
        refl[:, i] = out
        X[out] -= 2 * s[out, None] * nrm[None, :]
    return X, dist, refl


def build_polygon_factorization(n: int) -> tuple[SlackMatrix, NonnegFactorization]:
    """Slack matrix of the regular n-gon and its rank-2q folding factorization."""
    axes = folding_axes(n)
    q = len(axes)
    P = make_regular_ngon(n)
    H = polygon_to_hrep(P)
    V = P.as_array()

    a_last, a_dist, a_out = _fold_all(H.A, axes)
    v_last, v_dist, v_out = _fold_all(V, axes)

    v1 = V[0]
    if np.abs(v_last - v1[None, :]).max() > TERMINAL_TOL:
        raise FoldingDivergence("some vertex does not fold onto v_1")
    e12, en1 = H.A[0], H.A[n - 1]
    to12 = np.abs(a_last - e12[None, :]).max(axis=1)
    ton1 = np.abs(a_last - en1[None, :]).max(axis=1)
    if np.minimum(to12, ton1).max() > TERMINAL_TOL:
        raise FoldingDivergence("some facet does not fold onto a facet through v_1")

    # component i: T gets (sqrt2 d, 0) for a reflected facet, (0, sqrt2 d) otherwise;
    # U mirrors it, so t_i . u_i is nonzero only for opposite sides
    T = np.zeros((n, 2 * q))
    U = np.zeros((2 * q, n))
    T[:, 0::2] = np.where(a_out, SQRT2 * a_dist, 0.0)
    T[:, 1::2] = np.where(a_out, 0.0, SQRT2 * a_dist)
    U[0::2, :] = np.where(v_out, 0.0, SQRT2 * v_dist).T
    U[1::2, :] = np.where(v_out, SQRT2 * v_dist, 0.0).T

    S = slack_matrix(H, V)
    return S, NonnegFactorization(T, U, "float64")


@dataclass(frozen=True)
class StepIdentity:
    step: int
    lhs: float  # slack of v^(i) against F^(i)
    rhs: float  # slack of v^(i+1) against F^(i+1)
    correction: float
    opposite: bool

    @property
    def error(self) -> float:
        return abs(self.lhs - (self.rhs + self.correction))


@dataclass(frozen=True)
class TelescopingReport:
    steps: tuple
    initial_slack: float
    final_slack: float
    max_error: float
    passed: bool


def telescoping_slack_check(a, beta: float, v, axes: list[FoldAxis], tol: float = 1e-10) -> TelescopingReport:
    """Trace slack of a vertex against a facet through every fold step.

    Each step either keeps the slack (same side of the axis) or loses exactly
    ``2 d(a, l) d(v, l)`` (opposite sides); the final slack is 0.
    """
    fa = _fold(a, axes)
    fv = _fold(v, axes)
    steps = []
    for i, ax in enumerate(axes):
        ai, vi = np.asarray(fa.points[i]), np.asarray(fv.points[i])
        aj, vj = np.asarray(fa.points[i + 1]), np.asarray(fv.points[i + 1])
        lhs = beta - float(ai @ vi)
        rhs = beta - float(aj @ vj)
        da, dv = ax.distance(ai), ax.distance(vi)
        # strictly opposite sides; a point on the axis contributes nothing
        opposite = fa.side_flags[i] != fv.side_flags[i] and min(da, dv) > ON_AXIS_TOL
        corr = 2 * da * dv if opposite else 0.0
        steps.append(StepIdentity(i, lhs, rhs, corr, opposite))
    initial = beta - float(np.asarray(a) @ np.asarray(v))
    final = beta - float(np.asarray(fa.points[-1]) @ np.asarray(fv.points[-1]))
    max_err = max((s.error for s in steps), default=0.0)
    return TelescopingReport(
        tuple(steps), initial, final, max_err, max_err <= tol and abs(final) <= TERMINAL_TOL
    )
