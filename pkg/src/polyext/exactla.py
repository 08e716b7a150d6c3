"""Exact linear algebra over the rationals."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np


def det(M: list[list]) -> Fraction:
    """Fraction-free (Bareiss) determinant of a square integer/rational matrix."""
    k = len(M)
    if k == 0:
        return Fraction(1)
    lcm = 1
    for row in M:
        for v in row:
            lcm = math.lcm(lcm, Fraction(v).denominator)
    a = [[int(Fraction(v) * lcm) for v in row] for row in M]
    sign, prev = 1, 1
    for c in range(k - 1):
        if a[c][c] == 0:
            p = next((r for r in range(c + 1, k) if a[r][c] != 0), None)
            if p is None:
                return Fraction(0)
            a[c], a[p] = a[p], a[c]
            sign = -sign
        for i in range(c + 1, k):
            for j in range(c + 1, k):
                a[i][j] = (a[i][j] * a[c][c] - a[i][c] * a[c][j]) // prev
        prev = a[c][c]
    return Fraction(sign * a[k - 1][k - 1], lcm**k)


def gram_det(M: np.ndarray, I) -> Fraction:
    rows = [M[i] for i in I]
    G = [[sum(x * y for x, y in zip(r, s)) for s in rows] for r in rows]
    return det(G)


def exact_rank(M: np.ndarray) -> int:
    """Rank over the rationals by Gaussian elimination with Fractions."""
    rows = [[Fraction(v) for v in row] for row in M]
    rank, ncols = 0, (len(rows[0]) if rows else 0)
    for c in range(ncols):
        p = next((r for r in range(rank, len(rows)) if rows[r][c] != 0), None)
        if p is None:
            continue
        rows[rank], rows[p] = rows[p], rows[rank]
        piv = rows[rank]
        for r in range(rank + 1, len(rows)):
            f = rows[r][c] / piv[c]
            if f:
                rows[r] = [x - f * y for x, y in zip(rows[r], piv)]
        rank += 1
    return rank
