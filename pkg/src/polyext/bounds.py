"""Lower bounds on extension size that can actually be computed."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput
from .exactla import exact_rank
from .scalars import RATIONAL
from .slack import SlackMatrix

RANK_REL_TOL = 1e-9


def face_count_lower_bound(face_count: int) -> int:
    """ceil(log2(f)): an extension with k facets has at most 2^k faces."""
    if face_count < 1:
        raise InvalidInput(f"face count must be >= 1, got {face_count}")
    return (face_count - 1).bit_length()


def ngon_face_count(n: int) -> int:
    """n vertices, n edges, the polygon itself and the empty face."""
    return 2 * n + 2


def permutahedron_face_count(n: int) -> int:
    """Nonempty faces correspond to ordered set partitions of {1..n}; add the empty face."""
    # ordered Bell numbers via a(k) = sum_{i=1..k} C(k, i) a(k - i)
    a = [1]
    for k in range(1, n + 1):
        a.append(sum(math.comb(k, i) * a[k - i] for i in range(1, k + 1)))
    return a[n] + 1


def linear_rank_lower_bound(S: SlackMatrix) -> int:
    """rank(S), which never exceeds the nonnegative rank.

    Exact elimination in rational mode; in float mode singular values below
    ``1e-9 * sigma_max`` count as zero.
    """
    M = S.to_array()
    if M.size == 0:
        return 0
    if S.mode == RATIONAL:
        return exact_rank(M)
    sv = np.linalg.svd(M, compute_uv=False)
    if sv[0] == 0:
        return 0
    return int(np.sum(sv > RANK_REL_TOL * sv[0]))


@dataclass
class BoundsReport:
    face_count_bound: int
    linear_rank_bound: int
    construction_rank: int | None = None

    @property
    def gap(self) -> int | None:
        if self.construction_rank is None:
            return None
        return self.construction_rank - max(self.face_count_bound, self.linear_rank_bound)

    @property
    def consistent(self) -> bool:
        if self.construction_rank is None:
            return self.face_count_bound >= 0
        return self.construction_rank >= max(self.face_count_bound, self.linear_rank_bound)

    def to_json(self) -> dict:
        return {
            "face_count_bound": self.face_count_bound,
            "linear_rank_bound": self.linear_rank_bound,
            "construction_rank": self.construction_rank,
            "gap": self.gap,
            "pass": self.consistent,
        }


def bounds_report(S: SlackMatrix, face_count: int, construction_rank: int | None = None) -> BoundsReport:
    return BoundsReport(
        face_count_lower_bound(face_count), linear_rank_lower_bound(S), construction_rank
    )
