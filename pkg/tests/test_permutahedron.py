import itertools
import math

import numpy as np
import pytest

from polyext.errors import InvalidInput, InvalidSize, TooLarge
from polyext.network import (
    ComparatorNetwork,
    batcher_network,
    comparator_conditional_reflect,
)
from polyext.permfold import build_permutahedron_factorization, telescoping_identity_holds
from polyext.polytope import Permutahedron, PointVec, permutahedron_hrep, permutahedron_vertices
from polyext.slack import slack_matrix, verify_factorization


def test_batcher_small():
    assert batcher_network(2).comparators == ((1, 2),)
    assert batcher_network(4).size == 5
    assert batcher_network(3).sorts_all_permutations()
    with pytest.raises(InvalidSize):
        batcher_network(1)


@pytest.mark.parametrize("n", range(2, 17))
def test_batcher_zero_one_principle(n):
    assert batcher_network(n).sorts_all_binary()


def test_zero_one_check_rejects_bad_network():
    assert not ComparatorNetwork(3, ((1, 2), (2, 3))).sorts_all_binary()
    with pytest.raises(InvalidInput):
        ComparatorNetwork(3, ((2, 1),))


def test_batcher_size_growth():
    # size must stay within n log2(n)^2
    for n in (8, 16, 32, 64, 128):
        assert batcher_network(n).size <= n * math.log2(n) ** 2


def test_comparator_reflect():
    assert comparator_conditional_reflect([2, 1], (1, 2)) == ([1, 2], False)
    assert comparator_conditional_reflect([1, 2], (1, 2)) == ([1, 2], True)
    assert comparator_conditional_reflect([3, 3], (1, 2)) == ([3, 3], True)
    p, flag = comparator_conditional_reflect(PointVec((3, 1, 2), "rational"), (1, 3))
    assert p == PointVec((2, 1, 3), "rational") and not flag
    with pytest.raises(InvalidInput):
        comparator_conditional_reflect([1, 2], (1, 3))


@pytest.mark.parametrize("n,size", [(3, 3), (4, 5)])
def test_factorization_small(n, size):
    S, F = build_permutahedron_factorization(n)
    assert S.shape == (2**n - 2, math.factorial(n))
    assert F.r == 2 * size
    rep = verify_factorization(S, F)
    assert rep.passed and rep.max_residual == 0


def test_slack_matches_hrep_evaluation():
    n = 4
    S, _ = build_permutahedron_factorization(n)
    K = Permutahedron(n)
    oracle = slack_matrix(permutahedron_hrep(K), list(permutahedron_vertices(K))).to_array()
    assert (S.to_array() == oracle).all()


def test_entries_are_python_ints():
    S, F = build_permutahedron_factorization(4)
    assert all(type(v) is int for v in F.T.flat)
    assert all(type(v) is int for v in F.U.flat)
    assert min(F.T.flat) >= 0 and min(F.U.flat) >= 0


def test_terminal_slack_zero():
    for n in (3, 4, 5):
        S, _ = build_permutahedron_factorization(n)
        K = Permutahedron(n)
        subsets = K.subsets()
        for row, sub in enumerate(subsets):
            suffix = tuple(range(n - len(sub) + 1, n + 1))
            if sub == suffix:
                assert S.to_array()[row, 0] == 0  # column 0 is (1, ..., n)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_telescoping_exact(n):
    K = Permutahedron(n)
    net = batcher_network(n)
    for sub in K.subsets():
        a = [1 if j in sub else 0 for j in range(1, n + 1)]
        for v in itertools.permutations(range(1, n + 1)):
            assert telescoping_identity_holds(a, v, net, K.g(len(sub)))


def test_cap():
    with pytest.raises(TooLarge):
        build_permutahedron_factorization(9)
    with pytest.raises(TooLarge):
        build_permutahedron_factorization(5, cap=4)
