"""Batcher odd-even mergesort comparator networks."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput, InvalidSize
from .polytope import PointVec


@dataclass(frozen=True)
class ComparatorNetwork:
    n: int
    comparators: tuple  # 1-based (j, k) with j < k

    def __post_init__(self):
        for j, k in self.comparators:
            if not 1 <= j < k <= self.n:
                raise InvalidInput(f"bad comparator ({j}, {k}) for {self.n} inputs")

    @property
    def size(self) -> int:
        return len(self.comparators)

    def apply(self, x):
        """Sort a sequence: min goes to position j, max to k."""
        x = list(x)
        for j, k in self.comparators:
            if x[j - 1] > x[k - 1]:
                x[j - 1], x[k - 1] = x[k - 1], x[j - 1]
        return x

    def sorts_all_binary(self) -> bool:
        """Zero-one principle: check every 0/1 input at once, bit-parallel."""
        if self.n > 24:
            raise InvalidSize("exhaustive 0-1 check is limited to n <= 24")
        codes = np.arange(2**self.n, dtype=np.int64)
        cols = [((codes >> i) & 1).astype(np.int8) for i in range(self.n)]
        for j, k in self.comparators:
            a, b = cols[j - 1], cols[k - 1]
            cols[j - 1], cols[k - 1] = np.minimum(a, b), np.maximum(a, b)
        return all(bool(np.all(cols[i] <= cols[i + 1])) for i in range(self.n - 1))

    def sorts_all_permutations(self) -> bool:
        target = list(range(self.n))
        return all(self.apply(p) == target for p in itertools.permutations(range(self.n)))


def batcher_network(n: int) -> ComparatorNetwork:
    """Odd-even mergesort for any n >= 2 (the power-of-two network with the
    comparators touching padded positions removed)."""
    if n < 2:
        raise InvalidSize(f"a sorting network needs n >= 2, got {n}")
    comps = []
    p = 1
    while p < n:
        k = p
        while k >= 1:
            for j in range(k % p, n - k, 2 * k):
                for i in range(min(k, n - j - k)):
                    if (i + j) // (2 * p) == (i + j + k) // (2 * p):
                        comps.append((i + j + 1, i + j + k + 1))
            k //= 2
        p *= 2
    return ComparatorNetwork(n, tuple(comps))


def comparator_conditional_reflect(x, comparator: tuple[int, int]):
    """Swap coordinates j and k when x_j > x_k; flag True when already ordered.

    Accepts a PointVec (returned as one) or any sequence (returned as a list).
    """
    j, k = comparator
    if not 1 <= j < k <= len(x):
        raise InvalidInput(f"comparator ({j}, {k}) out of range for dimension {len(x)}")
    y = list(x)
    flag = not y[j - 1] > y[k - 1]
    if not flag:
        y[j - 1], y[k - 1] = y[k - 1], y[j - 1]
    if isinstance(x, PointVec):
        return PointVec(tuple(y), x.mode), flag
    return y, flag
