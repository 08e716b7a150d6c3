"""Exact integer factorization of the permutahedron's slack matrix.

A sorting network plays the role of the symmetry axes: the comparator (j, k)
is the conditional reflection across x_j = x_k, and sqrt(2) times the
distance to that hyperplane is |x_j - x_k|, an integer on all the data here.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import FoldingDivergence
from .network import ComparatorNetwork, batcher_network
from .polytope import (
    PERMUTAHEDRON_CAP,
    Permutahedron,
    _check_cap,
    permutahedron_hrep,
)
from .slack import NonnegFactorization, SlackMatrix, exact_matmul


@dataclass(frozen=True)
class PermutahedronFolding:
    """Per-comparator distances and reflection flags for a batch of points."""

    final: np.ndarray
    dist: np.ndarray  # (points, q) of |x_j - x_k| before comparator i
    reflected: np.ndarray  # (points, q) True when x_j > x_k (swap happened)


def fold_points(X: np.ndarray, network: ComparatorNetwork) -> PermutahedronFolding:
    X = np.array(X, dtype=np.int64, copy=True)
    q = network.size
    dist = np.empty((X.shape[0], q), dtype=np.int64)
    refl = np.empty((X.shape[0], q), dtype=bool)
    rows_sum = X.sum(axis=1)
    for i, (j, k) in enumerate(network.comparators):
        a, b = X[:, j - 1].copy(), X[:, k - 1].copy()
        out = a > b
        dist[:, i] = np.abs(a - b)
        refl[:, i] = out
        X[out, j - 1] = b[out]
        X[out, k - 1] = a[out]
        # a swap is a reflection fixing the all-ones direction
        assert np.array_equal(X.sum(axis=1), rows_sum)
    return PermutahedronFolding(X, dist, refl)


def _to_object(arr: np.ndarray) -> np.ndarray:
    # int64 -> object yields Python ints
    return arr.astype(object)


def build_permutahedron_factorization(
    n: int, cap: int = PERMUTAHEDRON_CAP, network: ComparatorNetwork | None = None
) -> tuple[SlackMatrix, NonnegFactorization]:
    """Slack matrix ((2^n - 2) x n!) and its rank 2 * |network| factorization."""
    K = Permutahedron(n)
    _check_cap(K, cap)
    network = network or batcher_network(n)
    H = permutahedron_hrep(K, cap)
    A = np.array(H.A, dtype=np.int64)
    b = np.array(H.b, dtype=np.int64)
    V = np.array(list(itertools.permutations(range(1, n + 1))), dtype=np.int64)

    fa = fold_points(A, network)
    fv = fold_points(V, network)

    if not np.all(fv.final == np.arange(1, n + 1)[None, :]):
        raise FoldingDivergence("some vertex does not fold onto (1, ..., n)")
    sizes = A.sum(axis=1)
    suffix = np.arange(1, n + 1)[None, :] > (n - sizes)[:, None]
    if not np.array_equal(fa.final.astype(bool), suffix):
        raise FoldingDivergence("some facet does not fold onto its sorted-suffix facet")

    q = network.size
    T = np.zeros((A.shape[0], 2 * q), dtype=np.int64)
    U = np.zeros((2 * q, V.shape[0]), dtype=np.int64)
    T[:, 0::2] = np.where(fa.reflected, fa.dist, 0)
    T[:, 1::2] = np.where(fa.reflected, 0, fa.dist)
    U[0::2, :] = np.where(fv.reflected, 0, fv.dist).T
    U[1::2, :] = np.where(fv.reflected, fv.dist, 0).T

    S = _to_object(b[:, None] - A @ V.T)
    return SlackMatrix(S, "rational"), NonnegFactorization(_to_object(T), _to_object(U), "rational")


def telescoping_identity_holds(a, v, network: ComparatorNetwork, beta: int) -> bool:
    """Exact per-step check of the slack bookkeeping for one facet/vertex pair."""
    a, v = list(a), list(v)
    for j, k in network.comparators:
        before = beta - sum(x * y for x, y in zip(a, v))
        a_out, v_out = a[j - 1] > a[k - 1], v[j - 1] > v[k - 1]
        corr = abs(a[j - 1] - a[k - 1]) * abs(v[j - 1] - v[k - 1]) if a_out != v_out else 0
        if a_out:
            a[j - 1], a[k - 1] = a[k - 1], a[j - 1]
        if v_out:
            v[j - 1], v[k - 1] = v[k - 1], v[j - 1]
        after = beta - sum(x * y for x, y in zip(a, v))
        if before != after + corr:
            return False
    return beta - sum(x * y for x, y in zip(a, v)) == 0
