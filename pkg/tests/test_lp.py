import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import linprog

from polyext.lp import LPProblem, solve


def test_max_single_variable():
    res = solve(LPProblem.from_rows([[1]], ["<="], [3], c=[1]))
    assert res.status == "optimal" and res.value == 3 and res.x == [3]


def test_box_infeasible():
    p = LPProblem.from_rows([[1, 1]], ["<="], [-1], hi=[1, 1], sense="feasibility")
    assert solve(p).status == "infeasible"


def test_unbounded():
    assert solve(LPProblem.from_rows([[1, -1]], ["<="], [1], c=[1, 1])).status == "unbounded"


def test_equality_and_ge_rows():
    p = LPProblem.from_rows([[1, 1], [1, -1]], ["==", ">="], [4, 1], c=[0, 1])
    res = solve(p)
    assert res.value == Fraction(3, 2) and res.x == [Fraction(5, 2), Fraction(3, 2)]


def test_free_variables():
    p = LPProblem.from_rows(
        [[1, 0], [0, 1], [1, 1]], ["<=", "<=", ">="], [2, 3, -10], lo=[None, None], c=[-1, -1]
    )
    res = solve(p)
    assert res.value == 10


def test_beale_cycling_example():
    # classic instance on which Dantzig's rule cycles; value checked against scipy
    A = [["1/4", -8, -1, 9], ["1/2", -12, "-1/2", 3], [0, 0, 1, 0]]
    c = ["3/4", -20, "1/2", -6]
    res = solve(LPProblem.from_rows(A, ["<="] * 3, [0, 0, 1], c=c), debug=True)
    ref = linprog([-0.75, 20, -0.5, 6], A_ub=[[0.25, -8, -1, 9], [0.5, -12, -0.5, 3], [0, 0, 1, 0]], b_ub=[0, 0, 1])
    assert res.status == "optimal"
    assert float(res.value) == pytest.approx(-ref.fun, abs=1e-12)
    assert res.value == Fraction(5, 4)


def _vertex_oracle(A, b, lo, hi, c):
    """Brute force: every vertex is the solution of d tight constraints."""
    d = len(c)
    rows = [(list(map(Fraction, A[i])), Fraction(b[i])) for i in range(len(A))]
    for j in range(d):
        e = [Fraction(0)] * d
        e[j] = Fraction(1)
        rows.append((e, Fraction(hi[j])))
        rows.append(([-v for v in e], -Fraction(lo[j])))
    best = None
    for combo in itertools.combinations(rows, d):
        M = [list(r[0]) + [r[1]] for r in combo]
        # Gauss-Jordan over Fractions
        ok = True
        for col in range(d):
            piv = next((r for r in range(col, d) if M[r][col] != 0), None)
            if piv is None:
                ok = False
                break
            M[col], M[piv] = M[piv], M[col]
            for r in range(d):
                if r != col and M[r][col] != 0:
                    f = M[r][col] / M[col][col]
                    M[r] = [a - f * bb for a, bb in zip(M[r], M[col])]
        if not ok:
            continue
        x = [M[i][d] / M[i][i] for i in range(d)]
        if all(sum(a * xi for a, xi in zip(r[0], x)) <= r[1] for r in rows):
            val = sum(ci * xi for ci, xi in zip(c, x))
            best = val if best is None else max(best, val)
    return best


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(0, 3), st.integers(0, 10**9))
def test_random_boxes_match_vertex_enumeration(d, extra, seed):
    rng = np.random.default_rng(seed)
    lo = rng.integers(-5, 1, size=d).tolist()
    hi = (np.array(lo) + rng.integers(1, 6, size=d)).tolist()
    A = rng.integers(-4, 5, size=(extra, d)).tolist()
    # keep the box centre feasible so the problem is never empty
    centre = [(l + h) / 2 for l, h in zip(lo, hi)]
    b = [int(np.ceil(np.dot(row, centre))) + int(rng.integers(0, 3)) for row in A]
    c = rng.integers(-5, 6, size=d).tolist()
    res = solve(LPProblem.from_rows(A or np.zeros((0, d), dtype=int), ["<="] * extra, b, lo=lo, hi=hi, c=c))
    assert res.status == "optimal"
    assert res.value == _vertex_oracle(A, b, lo, hi, c)
    # exact feasibility of the returned point
    for row, bi in zip(A, b):
        assert sum(a * x for a, x in zip(row, res.x)) <= bi
    assert all(l <= x <= h for l, x, h in zip(lo, res.x, hi))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9))
def test_float_matches_rational_and_scipy(seed):
    rng = np.random.default_rng(seed)
    m, n = rng.integers(2, 8), rng.integers(2, 6)
    A = rng.integers(-5, 6, size=(m, n))
    b = rng.integers(1, 10, size=m)
    c = rng.integers(-3, 6, size=n)
    hi = rng.integers(1, 8, size=n)
    exact = solve(LPProblem.from_rows(A.tolist(), ["<="] * m, b.tolist(), hi=hi.tolist(), c=c.tolist()))
    flt = solve(
        LPProblem.from_rows(A.astype(float), ["<="] * m, b.astype(float), hi=hi.astype(float), c=c.astype(float), mode="float64")
    )
    ref = linprog(-c, A_ub=A, b_ub=b, bounds=list(zip([0] * n, hi)))
    assert exact.status == flt.status == "optimal"
    assert flt.value == pytest.approx(float(exact.value), rel=1e-7, abs=1e-9)
    assert float(exact.value) == pytest.approx(-ref.fun, rel=1e-7, abs=1e-9)
    assert np.all(A @ np.array(flt.x) <= b + 1e-8)


def test_debug_history_has_no_repeats():
    rng = np.random.default_rng(5)
    for _ in range(20):
        A = rng.integers(-3, 4, size=(6, 4)).tolist()
        res = solve(LPProblem.from_rows(A, ["<="] * 6, [1] * 6, hi=[3] * 4, c=[1, 1, 1, 1]), debug=True)
        assert res.status == "optimal"


def test_float_iteration_cap():
    from polyext.errors import NumericalFailure

    p = LPProblem.from_rows([[1.0, 2.0], [3.0, 1.0]], ["<=", "<="], [4.0, 6.0], c=[1.0, 1.0], mode="float64")
    with pytest.raises(NumericalFailure):
        solve(p, max_iter=1)
