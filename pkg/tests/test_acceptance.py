"""Acceptance criteria, one test each.  Run directly or through pytest; every
criterion prints a single PASS/FAIL line in the terminal summary."""

import math
import random
import sys
import time
from contextlib import contextmanager

import numpy as np
import pytest

from polyext.bounds import (
    face_count_lower_bound,
    linear_rank_lower_bound,
    ngon_face_count,
    permutahedron_face_count,
)
from polyext.extension import build_extension, check_projection_inclusion, lift_vertex
from polyext.folding import build_polygon_factorization, folding_axes
from polyext.network import batcher_network
from polyext.permfold import build_permutahedron_factorization
from polyext.polytope import (
    Permutahedron,
    make_grid_parabola_polygon,
    make_regular_ngon,
    permutahedron_hrep,
    permutahedron_vertices,
    polygon_to_hrep,
)
from polyext.rounding import (
    check_coefficient_bounds,
    compute_delta,
    max_expansion_coefficient,
    prepare_rounded_system,
    rounding_error_ok,
    verify_recovery,
)
from polyext.slack import (
    NonnegFactorization,
    check_norm_bound,
    is_normalized,
    normalize_pair,
    prune_zero_components,
    slack_matrix,
    trivial_factorization,
    verify_factorization,
)

RESULTS: dict[int, tuple[bool, str]] = {}


@contextmanager
def criterion(num: int, title: str):
    ok = False
    try:
        yield
        ok = True
    finally:
        RESULTS[num] = (ok, title)
        print(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {title}")


def test_criterion_1_octagon_rank_six():
    with criterion(1, "regular 8-gon: rank 6, full residual <= 1e-9 |S|, < 1 s"):
        t0 = time.perf_counter()
        S, F = build_polygon_factorization(8)
        rep = verify_factorization(S, F, 1e-9)
        elapsed = time.perf_counter() - t0
        assert F.r == 6
        assert rep.passed and rep.entries_checked == 64 and not rep.sampled
        assert rep.max_residual <= 1e-9 * rep.norm_S
        assert elapsed < 1.0


def test_criterion_2_fifteen_gon_axes():
    with criterion(2, "15-gon: 4 folding axes, rank 8"):
        assert len(folding_axes(15)) == 4
        S, F = build_polygon_factorization(15)
        assert F.r == 8 and verify_factorization(S, F, 1e-9).passed


def test_criterion_3_logarithmic_scaling():
    with criterion(3, "rank 2*ceil(log2 n); full checks to n=4096 < 60 s; 1e6 samples at n=2^16 < 60 s"):
        t0 = time.perf_counter()
        for n in (3, 4, 5, 8, 15, 16, 17, 100, 1024, 4096):
            S, F = build_polygon_factorization(n)
            assert F.r == 2 * math.ceil(math.log2(n)), n
            rep = verify_factorization(S, F, 1e-9)
            assert rep.passed and not rep.sampled and rep.entries_checked == n * n, n
        assert time.perf_counter() - t0 < 60

        t0 = time.perf_counter()
        n = 2**16
        S, F = build_polygon_factorization(n)
        assert F.r == 2 * 16
        rep = verify_factorization(S, F, 1e-9, sample=10**6, seed=2024)
        assert rep.passed and rep.entries_checked == 10**6
        assert time.perf_counter() - t0 < 60


def test_criterion_4_permutahedron_exact():
    with criterion(4, "permutahedron n=3..6: exact T U = S, (2^n-2) x n!, rank 2|network|, n=6 < 60 s"):
        for n in (3, 4, 5, 6):
            t0 = time.perf_counter()
            S, F = build_permutahedron_factorization(n)
            rep = verify_factorization(S, F)
            elapsed = time.perf_counter() - t0
            assert S.shape == (2**n - 2, math.factorial(n))
            assert rep.passed and rep.max_residual == 0
            assert all(type(v) is int for v in F.T.flat) and all(type(v) is int for v in F.U.flat)
            assert F.r == 2 * batcher_network(n).size
            if n == 6:
                assert elapsed < 60


def _projection_certified(H, F, V) -> bool:
    Q = build_extension(H, F, V)
    for j in range(len(V)):
        lift_vertex(j, F, H, V)
    return check_projection_inclusion(Q, H).passed


def test_criterion_5_projection_equals_polytope():
    with criterion(5, "n-gons n<=32, permutahedra n<=4: vertices lift, facet LP optima equal b_i"):
        for n in range(3, 33):
            _, F = build_polygon_factorization(n)
            P = make_regular_ngon(n)
            assert _projection_certified(polygon_to_hrep(P), F, P.vertices), n
        for n in (2, 3, 4):
            _, F = build_permutahedron_factorization(n)
            K = Permutahedron(n)
            assert _projection_certified(permutahedron_hrep(K), F, list(permutahedron_vertices(K))), n


def _random_pair(rng: random.Random, exact: bool):
    m, r, n = rng.randint(1, 6), rng.randint(1, 5), rng.randint(1, 6)
    if exact:
        T = np.array([[rng.randint(0, 30) for _ in range(r)] for _ in range(m)], dtype=object)
        U = np.array([[rng.randint(0, 30) for _ in range(n)] for _ in range(r)], dtype=object)
        for l in range(r):
            T[rng.randrange(m), l] += 1
            U[l, rng.randrange(n)] += 1
        return NonnegFactorization(T, U, "rational")
    T = np.array([[rng.random() * 10 ** rng.uniform(-3, 3) for _ in range(r)] for _ in range(m)])
    U = np.array([[rng.random() * 10 ** rng.uniform(-3, 3) for _ in range(n)] for _ in range(r)])
    return NonnegFactorization(T + 1e-6, U + 1e-6, "float64")


def test_criterion_6_norm_bound():
    with criterion(6, "normalized pairs: max(|T|, |U|) <= sqrt(|TU|) on 2000 random pairs and every construction"):
        rng = random.Random(6)
        for exact in (True, False):
            for _ in range(1000):
                Fn = normalize_pair(_random_pair(rng, exact))
                assert is_normalized(Fn)
                assert check_norm_bound(Fn)
        built = [build_polygon_factorization(n)[1] for n in (3, 4, 5, 8, 15, 16, 17, 100, 1024)]
        built += [build_permutahedron_factorization(n)[1] for n in (3, 4, 5, 6)]
        for n in range(3, 9):
            P = make_grid_parabola_polygon(n, seed=n)
            built.append(trivial_factorization(slack_matrix(polygon_to_hrep(P), P.vertices)))
        for F in built:
            assert check_norm_bound(normalize_pair(prune_zero_components(F)))


def test_criterion_7_lattice_recovery():
    with criterion(7, "rounded membership test recovers P cap Z^2 on [2n] x [4n^2], n=3..8, Delta=144n^4"):
        for n in range(3, 9):
            for P in (
                make_grid_parabola_polygon(n, subset=range(1, n + 1)),
                make_grid_parabola_polygon(n, seed=100 + n),
            ):
                t0 = time.perf_counter()
                H = polygon_to_hrep(P)
                S = slack_matrix(H, P.vertices)
                delta = compute_delta(2, 4 * n * n)
                assert delta == 144 * n**4
                assert check_coefficient_bounds(H, delta, S)
                R, sel, Fn = prepare_rounded_system(H, trivial_factorization(S), delta)
                assert all(R.invariants().values()) and rounding_error_ok(R, Fn)
                assert sel.exhaustive
                assert max_expansion_coefficient(np.concatenate([H.A, Fn.T], axis=1), sel.rows) <= 1
                rep = verify_recovery(R, H, [(1, 2 * n), (1, 4 * n * n)])
                assert rep.points_checked == 8 * n**3
                assert rep.passed, rep.disagreements[:5]
                if n == 8:
                    assert time.perf_counter() - t0 < 120


def test_criterion_8_lower_bounds_consistent():
    with criterion(8, "face-count and rank(S) bounds never exceed construction ranks; rational n-gons have rank(S) = 3"):
        for n in (3, 4, 5, 8, 15, 16, 17, 33, 100):
            S, F = build_polygon_factorization(n)
            assert face_count_lower_bound(ngon_face_count(n)) <= F.r
            assert linear_rank_lower_bound(S) <= F.r
        for n in (3, 4, 5, 6):
            S, F = build_permutahedron_factorization(n)
            assert face_count_lower_bound(permutahedron_face_count(n)) <= F.r
            assert face_count_lower_bound(2 * n + 2) <= F.r
            assert linear_rank_lower_bound(S) == n <= F.r
        for n in range(3, 65):
            P = make_grid_parabola_polygon(n, seed=n)
            S = slack_matrix(polygon_to_hrep(P), P.vertices)
            F = trivial_factorization(S)
            assert linear_rank_lower_bound(S) == 3
            assert face_count_lower_bound(ngon_face_count(n)) <= F.r


def test_criterion_9_existence_results_not_reproduced():
    with criterion(9, "non-constructive lower bounds: nothing numeric to reproduce; supported only by the suites for criteria 3-7"):
        # nothing numeric to reproduce; record that the supporting suites exist
        mod = sys.modules[__name__]
        for k in (3, 4, 5, 6, 7):
            assert any(name.startswith(f"test_criterion_{k}_") for name in dir(mod))


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
