"""Slack matrices, nonnegative factorizations and their normalization."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DegenerateFactor, InvalidInput, NotContained
from .polytope import LinearSystemH, PointVec
from .scalars import (
    FLOAT64,
    RATIONAL,
    Mode,
    as_matrix,
    check_mode,
    max_abs,
    rational_sqrt,
    same_mode,
    zeros,
)

NEGATIVE_SLACK_TOL = 1e-9
MATERIALIZE_CAP = 20_000_000
_BLOCK = 512


def exact_matmul(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Product of two object matrices.

    When every entry is a machine-size int and no partial sum can overflow,
    the product runs in int64 and is still exact.
    """
    if X.dtype != object and Y.dtype != object:
        return X @ Y
    if X.size and Y.size:
        xs, ys = X.ravel(), Y.ravel()
        if all(type(v) is int for v in xs) and all(type(v) is int for v in ys):
            bound = max_abs(X) * max_abs(Y) * max(X.shape[1], 1)
            if bound < 2**62:
                prod = X.astype(np.int64) @ Y.astype(np.int64)
                return prod.astype(object)
    if X.shape[1] == 0:
        return zeros((X.shape[0], Y.shape[1]), RATIONAL)
    return X.dot(Y)


class SlackMatrix:
    """The m x n matrix of slacks ``b_i - A_i v_j``.

    Either holds explicit ``entries`` or, for matrices too large to keep in
    memory, the generating data ``(A, b, V)`` from which any block can be
    recomputed on demand.
    """

    def __init__(self, entries=None, mode: Mode | None = None, *, A=None, b=None, V=None):
        if entries is not None:
            mode = check_mode(mode or (RATIONAL if np.asarray(entries).dtype == object else FLOAT64))
            self._entries = as_matrix(entries, mode)
            self.shape = self._entries.shape
            self._gen = None
        else:
            mode = check_mode(mode)
            self._entries = None
            self._gen = (A, b, V)
            self.shape = (A.shape[0], V.shape[0])
        self.mode = mode

    @property
    def materialized(self) -> bool:
        return self._entries is not None

    def block(self, rows, cols) -> np.ndarray:
        if self._entries is not None:
            return self._entries[rows][:, cols]
        A, b, V = self._gen
        blk = b[rows][:, None] - A[rows] @ V[cols].T
        if self.mode == FLOAT64:
            scale = max(float(np.max(np.abs(blk))) if blk.size else 0.0, 1.0)
            if blk.size and blk.min() < -NEGATIVE_SLACK_TOL * scale:
                raise NotContained("a point violates a facet inequality")
            np.maximum(blk, 0.0, out=blk)
        return blk

    def entries_at(self, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
        if self._entries is not None:
            return self._entries[rows, cols]
        A, b, V = self._gen
        vals = b[rows] - np.einsum("ij,ij->i", A[rows], V[cols])
        return np.maximum(vals, 0.0) if self.mode == FLOAT64 else vals

    def to_array(self) -> np.ndarray:
        if self._entries is None:
            m, n = self.shape
            if m * n > MATERIALIZE_CAP:
                raise InvalidInput(f"{m} x {n} slack matrix is too large to materialize")
            self._entries = self.block(np.arange(m), np.arange(n))
        return self._entries

    def max_entry(self):
        if self._entries is not None:
            return max_abs(self._entries)
        m, n = self.shape
        best = 0.0
        for r0 in range(0, m, _BLOCK):
            blk = self.block(np.arange(r0, min(r0 + _BLOCK, m)), np.arange(n))
            best = max(best, float(blk.max()))
        return best


@dataclass(frozen=True, eq=False)
class NonnegFactorization:
    """A pair (T, U) with T m x r and U r x n.

    ``scale_sq`` only appears in rational mode after normalization: component
    l of the normalized pair is ``T[:, l] * sqrt(s_l)`` and ``U[l] / sqrt(s_l)``
    with the irrational square root kept implicit.
    """

    T: np.ndarray
    U: np.ndarray
    mode: Mode
    scale_sq: tuple | None = field(default=None)

    def __post_init__(self):
        check_mode(self.mode)
        T = as_matrix(self.T, self.mode)
        U = as_matrix(self.U, self.mode)
        if T.shape[1] != U.shape[0]:
            raise InvalidInput(f"T has {T.shape[1]} columns but U has {U.shape[0]} rows")
        object.__setattr__(self, "T", T)
        object.__setattr__(self, "U", U)
        if self.scale_sq is not None:
            if self.mode != RATIONAL:
                raise InvalidInput("implicit scales only exist in rational mode")
            s = tuple(Fraction(v) for v in self.scale_sq)
            if len(s) != T.shape[1] or any(v <= 0 for v in s):
                raise InvalidInput("scale_sq must hold r positive rationals")
            object.__setattr__(self, "scale_sq", None if all(v == 1 for v in s) else s)

    @property
    def r(self) -> int:
        return self.T.shape[1]

    def product(self) -> np.ndarray:
        return exact_matmul(self.T, self.U) if self.mode == RATIONAL else self.T @ self.U

    def nonnegative(self) -> tuple[bool, bool]:
        if self.mode == RATIONAL:
            return all(v >= 0 for v in self.T.flat), all(v >= 0 for v in self.U.flat)
        return bool(np.all(self.T >= 0)), bool(np.all(self.U >= 0))

    def column_norms(self) -> list:
        """Infinity norms of the stored columns of T (implicit scales ignored)."""
        return [max_abs(self.T[:, l]) for l in range(self.r)]

    def row_norms(self) -> list:
        return [max_abs(self.U[l]) for l in range(self.r)]

    def scales(self) -> tuple:
        return self.scale_sq or tuple([1] * self.r)


def slack_matrix(H: LinearSystemH, V: Sequence[PointVec] | np.ndarray) -> SlackMatrix:
    """``S[i, j] = b_i - A_i v_j``; raises NotContained on a genuinely negative entry.

    Float entries above ``-1e-9 * max|S|`` are rounding noise and get clamped to 0.
    """
    if isinstance(V, np.ndarray):
        Varr = V
    else:
        pts = list(V)
        for p in pts:
            same_mode(p.mode, H.mode)
        Varr = as_matrix([list(p) for p in pts], H.mode)
    if Varr.shape[1] != H.d:
        raise InvalidInput(f"points have dimension {Varr.shape[1]}, system has {H.d}")
    m, n = H.m, Varr.shape[0]
    if H.mode == FLOAT64 and m * n > MATERIALIZE_CAP:
        return SlackMatrix(A=H.A, b=H.b, V=Varr, mode=FLOAT64)
    if H.mode == RATIONAL:
        S = H.b[:, None] - exact_matmul(H.A, Varr.T)
        if any(v < 0 for v in S.flat):
            raise NotContained("a point violates a facet inequality")
        return SlackMatrix(S, RATIONAL)
    S = H.b[:, None] - H.A @ Varr.T
    norm = float(np.max(np.abs(S))) if S.size else 0.0
    if S.size and S.min() < -NEGATIVE_SLACK_TOL * norm:
        raise NotContained("a point violates a facet inequality")
    np.maximum(S, 0.0, out=S)
    return SlackMatrix(S, FLOAT64)


def trivial_factorization(S: SlackMatrix) -> NonnegFactorization:
    """T = S, U = identity: always valid, rank n."""
    entries = S.to_array()
    n = S.shape[1]
    if S.mode == RATIONAL:
        U = zeros((n, n), RATIONAL)
        for j in range(n):
            U[j, j] = 1
    else:
        U = np.eye(n)
    return NonnegFactorization(entries.copy(), U, S.mode)


@dataclass
class VerificationReport:
    max_residual: object
    passed: bool
    mode: Mode
    norm_S: object
    tolerance: object
    t_nonnegative: bool
    u_nonnegative: bool
    entries_checked: int
    sampled: bool = False

    def to_json(self) -> dict:
        enc = (lambda v: str(Fraction(v))) if self.mode == RATIONAL else float
        return {
            "max_residual": enc(self.max_residual),
            "pass": self.passed,
            "mode": self.mode,
            "norm_S": enc(self.norm_S),
            "tolerance": enc(self.tolerance),
            "t_nonnegative": self.t_nonnegative,
            "u_nonnegative": self.u_nonnegative,
            "entries_checked": self.entries_checked,
            "sampled": self.sampled,
        }


def verify_factorization(
    S: SlackMatrix,
    F: NonnegFactorization,
    rel_tol: float = 1e-9,
    *,
    sample: int | None = None,
    seed: int = 0,
) -> VerificationReport:
    """Check ``S == T U`` entrywise and that both factors are nonnegative.

    Rational mode demands exact equality and ignores ``rel_tol``.  Float mode
    passes when ``max|S - TU| <= rel_tol * max|S|``.  With ``sample`` set only
    that many uniformly random entries are compared, and the reference norm is
    the largest sampled slack, which can only tighten the test.
    """
    same_mode(S.mode, F.mode)
    m, n = S.shape
    if F.T.shape[0] != m or F.U.shape[1] != n:
        raise InvalidInput(
            f"factor shapes {F.T.shape} x {F.U.shape} do not match slack shape {S.shape}"
        )
    t_ok, u_ok = F.nonnegative()

    if sample is not None:
        rng = np.random.default_rng(seed)
        rows = rng.integers(0, m, size=sample)
        cols = rng.integers(0, n, size=sample)
        s_vals = S.entries_at(rows, cols)
        if F.mode == RATIONAL:
            tu = np.array(
                [sum(F.T[i, l] * F.U[l, j] for l in range(F.r)) for i, j in zip(rows, cols)],
                dtype=object,
            )
        else:
            tu = np.einsum("ij,ji->i", F.T[rows], F.U[:, cols])
        resid = max_abs(s_vals - tu)
        norm = max_abs(s_vals)
        checked = sample
    elif F.mode == RATIONAL:
        resid = max_abs(S.to_array() - F.product())
        norm = max_abs(S.to_array())
        checked = m * n
    else:
        resid, norm = 0.0, 0.0
        cols = np.arange(n)
        for r0 in range(0, m, _BLOCK):
            rows = np.arange(r0, min(r0 + _BLOCK, m))
            blk = S.block(rows, cols)
            resid = max(resid, float(np.max(np.abs(blk - F.T[rows] @ F.U))))
            norm = max(norm, float(np.max(blk)))
        checked = m * n

    if F.mode == RATIONAL:
        tol = 0
        ok = resid == 0
    else:
        tol = rel_tol * norm
        ok = resid <= tol
    return VerificationReport(
        max_residual=resid,
        passed=bool(ok and t_ok and u_ok),
        mode=F.mode,
        norm_S=norm,
        tolerance=tol,
        t_nonnegative=t_ok,
        u_nonnegative=u_ok,
        entries_checked=checked,
        sampled=sample is not None,
    )


def prune_zero_components(F: NonnegFactorization) -> NonnegFactorization:
    """Drop components whose T column or U row is identically zero; TU is unchanged."""
    keep = [
        l for l, (tl, ul) in enumerate(zip(F.column_norms(), F.row_norms())) if tl != 0 and ul != 0
    ]
    if len(keep) == F.r:
        return F
    scale_sq = None if F.scale_sq is None else tuple(F.scale_sq[l] for l in keep)
    return NonnegFactorization(F.T[:, keep], F.U[keep, :], F.mode, scale_sq=scale_sq)


def normalize_pair(F: NonnegFactorization) -> NonnegFactorization:
    """Rescale each component so that column l of T and row l of U share one
    infinity norm; the product TU is unchanged.

    In rational mode the factor ``sqrt(|U_l| / |T^l|)`` is applied exactly when
    it is rational and otherwise recorded in ``scale_sq``.
    """
    t = F.column_norms()
    u = F.row_norms()
    for l, (tl, ul) in enumerate(zip(t, u)):
        if tl == 0 or ul == 0:
            raise DegenerateFactor(f"component {l} has a zero column of T or zero row of U")
    if F.mode == FLOAT64:
        lam = np.sqrt(np.asarray(u, dtype=float) / np.asarray(t, dtype=float))
        return NonnegFactorization(F.T * lam[None, :], F.U / lam[:, None], FLOAT64)

    T = F.T.copy()
    U = F.U.copy()
    scale_sq = []
    for l, (tl, ul) in enumerate(zip(t, u)):
        s = Fraction(ul) / Fraction(tl)
        lam = rational_sqrt(s)
        if lam is None:
            scale_sq.append(s)
            continue
        scale_sq.append(Fraction(1))
        if lam != 1:
            T[:, l] = [_tidy(v * lam) for v in T[:, l]]
            U[l, :] = [_tidy(v / lam) for v in U[l, :]]
    return NonnegFactorization(T, U, RATIONAL, scale_sq=tuple(scale_sq))


def _tidy(v):
    v = Fraction(v)
    return v.numerator if v.denominator == 1 else v


def is_normalized(F: NonnegFactorization, rel_tol: float = 1e-12) -> bool:
    t, u = F.column_norms(), F.row_norms()
    if F.mode == RATIONAL:
        s = F.scales()
        return all(
            Fraction(tl) ** 2 * sl == Fraction(ul) ** 2 / sl for tl, ul, sl in zip(t, u, s)
        )
    return all(abs(tl - ul) <= rel_tol * max(tl, ul) for tl, ul in zip(t, u))


def check_norm_bound(F: NonnegFactorization, rel_slack: float = 1e-9) -> bool:
    """Whether every entry of T and U is at most ``sqrt(max|TU|)``.

    The bound is guaranteed only for normalized pairs.  Rational mode compares
    squares, so implicit irrational scales never need to be evaluated.
    """
    M = max_abs(F.product())
    if F.mode == RATIONAL:
        M = Fraction(M)
        for l, s in enumerate(F.scales()):
            tl = Fraction(max_abs(F.T[:, l]))
            ul = Fraction(max_abs(F.U[l]))
            if tl * tl * s > M or ul * ul / s > M:
                return False
        return True
    bound = math.sqrt(M) * (1 + rel_slack)
    return max(max_abs(F.T), max_abs(F.U)) <= bound
