"""Polygons in vertex form, facet systems, the permutahedron and the parabola grid."""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .errors import (
    InvalidInput,
    InvalidPolygon,
    InvalidSelector,
    InvalidSize,
    ModeMismatch,
    TooLarge,
    UnsupportedMode,
)
from .scalars import (
    FLOAT64,
    RATIONAL,
    Mode,
    as_matrix,
    as_vector,
    check_mode,
    same_mode,
    to_scalar,
)

PERMUTAHEDRON_CAP = 8
FLOAT_CONVEXITY_TOL = 1e-12


@dataclass(frozen=True)
class PointVec:
    coords: tuple
    mode: Mode

    def __post_init__(self):
        check_mode(self.mode)
        object.__setattr__(
            self, "coords", tuple(to_scalar(c, self.mode) for c in self.coords)
        )

    @classmethod
    def of(cls, coords: Sequence, mode: Mode = RATIONAL) -> "PointVec":
        return cls(tuple(coords), mode)

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def _other(self, other: "PointVec") -> "PointVec":
        if not isinstance(other, PointVec):
            return NotImplemented
        same_mode(self.mode, other.mode)
        if len(other) != len(self):
            raise InvalidInput("dimension mismatch")
        return other

    def __add__(self, other):
        other = self._other(other)
        return PointVec(tuple(a + b for a, b in zip(self, other)), self.mode)

    def __sub__(self, other):
        other = self._other(other)
        return PointVec(tuple(a - b for a, b in zip(self, other)), self.mode)

    def __neg__(self):
        return PointVec(tuple(-a for a in self), self.mode)

    def scale(self, c) -> "PointVec":
        if self.mode == RATIONAL and isinstance(c, float):
            raise ModeMismatch("float scale applied to rational point")
        return PointVec(tuple(c * a for a in self), self.mode)

    def dot(self, other: "PointVec"):
        other = self._other(other)
        return sum((a * b for a, b in zip(self, other)), 0)

    def as_array(self) -> np.ndarray:
        return as_vector(self.coords, self.mode)


def cross(o: PointVec, a: PointVec, b: PointVec):
    """z-component of (a - o) x (b - o); positive for a left turn."""
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def signed_area(vertices: Sequence[PointVec]):
    n = len(vertices)
    twice = sum(
        vertices[i][0] * vertices[(i + 1) % n][1] - vertices[(i + 1) % n][0] * vertices[i][1]
        for i in range(n)
    )
    return Fraction(twice, 2) if isinstance(twice, (int, Fraction)) else twice / 2


@dataclass(frozen=True)
class PolygonV:
    """Convex polygon given by its vertices in counter-clockwise order."""

    vertices: tuple
    mode: Mode

    def __post_init__(self):
        check_mode(self.mode)
        verts = tuple(
            v if isinstance(v, PointVec) else PointVec(tuple(v), self.mode)
            for v in self.vertices
        )
        for v in verts:
            if v.mode != self.mode:
                raise ModeMismatch("vertex mode differs from polygon mode")
            if len(v) != 2:
                raise InvalidPolygon("polygon vertices must be 2D")
        object.__setattr__(self, "vertices", verts)
        self._validate()

    def _validate(self):
        n = len(self.vertices)
        if n < 3:
            raise InvalidSize(f"a polygon needs at least 3 vertices, got {n}")
        if len(set(self.vertices)) != n:
            raise InvalidPolygon("repeated vertex")
        for i in range(n):
            o, a, b = self.vertices[i - 1], self.vertices[i], self.vertices[(i + 1) % n]
            c = cross(o, a, b)
            # float turns must exceed 1e-12 relative to the adjacent edge lengths
            tol = 0 if self.mode != FLOAT64 else FLOAT_CONVEXITY_TOL * math.dist(o, a) * math.dist(a, b)
            if not c > tol:
                raise InvalidPolygon(
                    f"vertices not strictly convex counter-clockwise at index {i}"
                )
        if not signed_area(self.vertices) > 0:
            raise InvalidPolygon("polygon is not counter-clockwise")

    @property
    def n(self) -> int:
        return len(self.vertices)

    def as_array(self) -> np.ndarray:
        """n x 2 array of vertex coordinates."""
        return as_matrix([list(v) for v in self.vertices], self.mode)

    def area(self):
        return signed_area(self.vertices)


@dataclass(frozen=True, eq=False)
class LinearSystemH:
    """Inequalities ``A x <= b``, plus optional equations ``A_eq x = b_eq``.

    The equations only carry the affine hull of lower-dimensional polytopes
    (the permutahedron); they take no part in slack matrices.
    """

    A: np.ndarray
    b: np.ndarray
    mode: Mode
    A_eq: np.ndarray | None = None
    b_eq: np.ndarray | None = None

    def __post_init__(self):
        check_mode(self.mode)
        A = as_matrix(self.A, self.mode)
        b = as_vector(self.b, self.mode)
        if A.shape[0] != b.shape[0]:
            raise InvalidInput("A and b disagree on the number of rows")
        for i in range(A.shape[0]):
            if all(v == 0 for v in A[i]):
                raise InvalidInput(f"row {i} of A is zero")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        if self.A_eq is not None:
            A_eq = as_matrix(self.A_eq, self.mode)
            b_eq = as_vector(self.b_eq, self.mode)
            if A_eq.shape[0] != b_eq.shape[0] or A_eq.shape[1] != A.shape[1]:
                raise InvalidInput("equation block has inconsistent shape")
            object.__setattr__(self, "A_eq", A_eq)
            object.__setattr__(self, "b_eq", b_eq)

    @property
    def m(self) -> int:
        return self.A.shape[0]

    @property
    def d(self) -> int:
        return self.A.shape[1]

    def slack(self, x) -> np.ndarray:
        """b - A x for a single point."""
        xv = x.as_array() if isinstance(x, PointVec) else as_vector(x, self.mode)
        return self.b - self.A.dot(xv)

    def contains(self, x) -> bool:
        """Exact (rational) membership; equations are enforced when present."""
        xv = x.as_array() if isinstance(x, PointVec) else as_vector(x, self.mode)
        if any(s < 0 for s in self.slack(xv)):
            return False
        if self.A_eq is not None:
            return all(v == 0 for v in self.b_eq - self.A_eq.dot(xv))
        return True


@dataclass(frozen=True)
class Permutahedron:
    n: int

    def __post_init__(self):
        if self.n < 2:
            raise InvalidSize("the permutahedron needs n >= 2")

    def g(self, size: int) -> int:
        """Right-hand side of the facet for a subset of the given size."""
        return math.comb(self.n + 1, 2) - math.comb(self.n - size + 1, 2)

    @property
    def vertex_count(self) -> int:
        return math.factorial(self.n)

    @property
    def facet_count(self) -> int:
        return 2**self.n - 2

    def subsets(self) -> list[tuple[int, ...]]:
        """Proper non-empty subsets of {1..n}, by size then lexicographic."""
        return [
            c
            for k in range(1, self.n)
            for c in itertools.combinations(range(1, self.n + 1), k)
        ]


def make_regular_ngon(n: int, mode: Mode = FLOAT64) -> PolygonV:
    """Unit-circumradius regular n-gon centred at the origin with v_1 = (1, 0)."""
    if n < 3:
        raise InvalidSize(f"n must be >= 3, got {n}")
    if mode != FLOAT64:
        raise UnsupportedMode("regular polygons have irrational vertices; use float64")
    verts = tuple(
        PointVec((math.cos(2 * math.pi * j / n), math.sin(2 * math.pi * j / n)), FLOAT64)
        for j in range(n)
    )
    return PolygonV(verts, FLOAT64)


def _integer_row(a1, a2, b) -> tuple[int, int, int]:
    fr = [Fraction(a1), Fraction(a2), Fraction(b)]
    lcm = 1
    for f in fr:
        lcm = lcm * f.denominator // math.gcd(lcm, f.denominator)
    ints = [int(f * lcm) for f in fr]
    g = math.gcd(*ints)
    return tuple(v // g for v in ints)  # type: ignore[return-value]


def polygon_to_hrep(P: PolygonV) -> LinearSystemH:
    """Row i is the outer inequality of the edge from v_i to v_{i+1}.

    Rational polygons get primitive integer rows.  Float polygons containing
    the origin in their interior are scaled to ``b_i = 1``; otherwise rows get
    unit normals.
    """
    n = P.n
    rows, rhs = [], []
    for i in range(n):
        p, q = P.vertices[i], P.vertices[(i + 1) % n]
        a1, a2 = q[1] - p[1], -(q[0] - p[0])
        b = a1 * p[0] + a2 * p[1]
        if P.mode == RATIONAL:
            a1, a2, b = _integer_row(a1, a2, b)
        rows.append([a1, a2])
        rhs.append(b)
    if P.mode == FLOAT64:
        A = np.array(rows, dtype=np.float64)
        b = np.array(rhs, dtype=np.float64)
        if np.all(b > 0):
            A = A / b[:, None]
            b = np.ones(n)
        else:
            norms = np.linalg.norm(A, axis=1)
            A = A / norms[:, None]
            b = b / norms
        return LinearSystemH(A, b, FLOAT64)
    return LinearSystemH(rows, rhs, RATIONAL)


def make_grid_parabola_polygon(
    n: int, subset: Sequence[int] | None = None, seed: int | None = None
) -> PolygonV:
    """Polygon on the points (z, z^2) for z in a size-n subset of {1..2n}.

    Pass an explicit ``subset`` or a ``seed`` for a uniformly random one.
    """
    if n < 3:
        raise InvalidSize(f"n must be >= 3, got {n}")
    if subset is None:
        if seed is None:
            raise InvalidSelector("give either a subset or a seed")
        subset = random.Random(seed).sample(range(1, 2 * n + 1), n)
    elif seed is not None:
        raise InvalidSelector("give either a subset or a seed, not both")
    zs = list(subset)
    if any(isinstance(z, bool) or not isinstance(z, (int, np.integer)) for z in zs):
        raise InvalidSelector("subset entries must be integers")
    zs = sorted(int(z) for z in zs)
    if len(zs) != n or len(set(zs)) != n or zs[0] < 1 or zs[-1] > 2 * n:
        raise InvalidSelector(f"need {n} distinct integers from 1..{2 * n}, got {list(subset)}")
    verts = [PointVec((z, z * z), RATIONAL) for z in zs]
    if signed_area(verts) < 0:
        verts.reverse()
    return PolygonV(tuple(verts), RATIONAL)


def _check_cap(K: Permutahedron, cap: int):
    if K.n > cap:
        raise TooLarge(f"n = {K.n} exceeds the enumeration cap {cap}")


def permutahedron_vertices(
    K: Permutahedron, cap: int = PERMUTAHEDRON_CAP
) -> Iterator[PointVec]:
    """All permutations of (1..n), lexicographically."""
    _check_cap(K, cap)
    for perm in itertools.permutations(range(1, K.n + 1)):
        yield PointVec(perm, RATIONAL)


def permutahedron_hrep(K: Permutahedron, cap: int = PERMUTAHEDRON_CAP) -> LinearSystemH:
    """Subset-sum facets, plus the equation sum(x) = n(n+1)/2 for the affine hull."""
    _check_cap(K, cap)
    rows, rhs = [], []
    for S in K.subsets():
        members = set(S)
        rows.append([1 if j in members else 0 for j in range(1, K.n + 1)])
        rhs.append(K.g(len(S)))
    return LinearSystemH(
        rows, rhs, RATIONAL, A_eq=[[1] * K.n], b_eq=[math.comb(K.n + 1, 2)]
    )
