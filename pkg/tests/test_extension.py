import numpy as np
import pytest
from scipy.optimize import linprog

from polyext.errors import InvalidInput, LiftFailure
from polyext.extension import build_extension, check_projection_inclusion, lift_vertex
from polyext.folding import build_polygon_factorization
from polyext.permfold import build_permutahedron_factorization
from polyext.polytope import (
    Permutahedron,
    PolygonV,
    make_regular_ngon,
    permutahedron_hrep,
    permutahedron_vertices,
    polygon_to_hrep,
)
from polyext.slack import NonnegFactorization, slack_matrix, trivial_factorization

SQUARE = PolygonV(((1, 1), (-1, 1), (-1, -1), (1, -1)), "rational")


def test_square_trivial():
    H = polygon_to_hrep(SQUARE)
    F = trivial_factorization(slack_matrix(H, SQUARE.vertices))
    Q = build_extension(H, F, SQUARE.vertices)
    assert (Q.d, Q.r, Q.facet_bound) == (2, 4, 4)
    M, rhs = Q.constraint_matrix()
    assert M.shape == (4, 6)
    p = lift_vertex(0, F, H, SQUARE.vertices)
    assert p.coords[:2] == (1, 1)
    assert list(p.coords[2:]) == list(F.U[:, 0])
    rep = check_projection_inclusion(Q, H)
    assert rep.passed and rep.optima == list(H.b) and rep.gap == 0


def test_octagon_dimensions_and_lifts():
    S, F = build_polygon_factorization(8)
    P = make_regular_ngon(8)
    H = polygon_to_hrep(P)
    Q = build_extension(H, F, P.vertices)
    assert Q.d + Q.r == 8
    for j in range(8):
        p = lift_vertex(j, F, H, P.vertices)
        x, y = p.as_array()[:2], p.as_array()[2:]
        assert np.abs(H.A @ x + F.T @ y - H.b).max() <= 1e-12


def test_octagon_optima_match_vertex_maxima_and_scipy():
    S, F = build_polygon_factorization(8)
    P = make_regular_ngon(8)
    H = polygon_to_hrep(P)
    Q = build_extension(H, F)
    rep = check_projection_inclusion(Q, H)
    assert rep.passed
    V = P.as_array()
    M, rhs = Q.constraint_matrix()
    for i, opt in enumerate(rep.optima):
        direct = max(H.A[i] @ v for v in V)
        assert opt == pytest.approx(direct, abs=1e-7)
        ref = linprog(
            -np.concatenate([H.A[i], np.zeros(Q.r)]),
            A_eq=M, b_eq=rhs,
            bounds=[(None, None)] * 2 + [(0, None)] * Q.r,
        )
        assert opt == pytest.approx(-ref.fun, abs=1e-7)


def test_permutahedron_four():
    _, F = build_permutahedron_factorization(4)
    K = Permutahedron(4)
    H = permutahedron_hrep(K)
    V = list(permutahedron_vertices(K))
    Q = build_extension(H, F, V)
    assert (Q.d, Q.r) == (4, 10)
    for j in range(len(V)):
        lift_vertex(j, F, H, V)
    rep = check_projection_inclusion(Q, H)
    assert rep.passed and rep.gap == 0


def test_corrupted_factor_fails():
    P = make_regular_ngon(8)
    H = polygon_to_hrep(P)
    _, F = build_polygon_factorization(8)
    i, k = np.argwhere(F.T > 0)[0]
    T = F.T.copy()
    T[i, k] = 0.0
    bad = NonnegFactorization(T, F.U, F.mode)
    with pytest.raises(InvalidInput):
        build_extension(H, bad, P.vertices)
    Q = build_extension(H, bad)
    lifts_ok = True
    for j in range(P.n):
        try:
            lift_vertex(j, bad, H, P.vertices)
        except LiftFailure:
            lifts_ok = False
    assert not (lifts_ok and check_projection_inclusion(Q, H).passed)


def test_dimension_mismatch():
    H = polygon_to_hrep(SQUARE)
    F = NonnegFactorization(np.ones((3, 2), dtype=object), np.ones((2, 4), dtype=object), "rational")
    with pytest.raises(InvalidInput):
        build_extension(H, F)
