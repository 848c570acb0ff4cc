import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from affinenil.torus import (
    TorusAffineMap,
    apply,
    entropy_estimate_separated,
    eval_orbit,
    orbit,
    polynomial_orbit,
    return_times_direct,
    return_times_symbolic,
)
from affinenil.poly import UniPoly
from affinenil.rational import circle_distance, frac

import _corpus
from oracles import return_times as oracle_return_times
from oracles import torus_iterate

F = Fraction
SKEW = TorusAffineMap([[1, 0], [1, 1]], ["1/5", "0"])
ROT13 = TorusAffineMap.rotation("1/3")
ROT4 = TorusAffineMap([[0, -1], [1, 0]], ["0", "0"])
CAT = TorusAffineMap([[2, 1], [1, 1]], ["0", "0"])


def test_apply_examples():
    assert apply(TorusAffineMap([[1]], ["1/3"]), (F(0),)) == (F(1, 3),)
    assert apply(SKEW, (F(0), F(0))) == (F(1, 5), F(0))
    assert apply(CAT, (F(1, 2), F(1, 2))) == (F(1, 2), F(0))


def test_apply_dimension_mismatch():
    with pytest.raises(ValueError, match="dimension"):
        apply(SKEW, (F(0),))
    with pytest.raises(ValueError):
        TorusAffineMap([[1, 0], [0, 1]], ["1/2"])
    with pytest.raises(ValueError):
        TorusAffineMap([["1/2"]], ["0"])


def test_polynomial_orbit_rotation():
    orb = polynomial_orbit(ROT13, (F(0),))
    assert orb.b == 1
    assert orb.polys[0][0] == UniPoly([0, F(1, 3)])


def test_polynomial_orbit_skew():
    t = UniPoly.var()
    orb = polynomial_orbit(SKEW, (F(0), F(0)))
    assert orb.b == 1
    assert orb.polys[0] == (t * F(1, 5), t * (t - 1) * F(1, 10))
    direct = orbit(SKEW, (0, 0), 100)
    assert all(eval_orbit(orb, n) == p for n, p in enumerate(direct))


def test_polynomial_orbit_finite_order():
    orb = polynomial_orbit(ROT4, ("1/4", "0"))
    assert orb.b == 4
    assert orb.max_degree() <= 0
    assert [eval_orbit(orb, n) for n in range(4)] == [(F(1, 4), F(0)), (F(0), F(1, 4)),
                                                      (F(3, 4), F(0)), (F(0), F(3, 4))]


def test_polynomial_orbit_rejects_positive_entropy():
    with pytest.raises(ValueError, match="zero entropy"):
        polynomial_orbit(CAT, (0, 0))


def test_eval_orbit_examples():
    orb = polynomial_orbit(SKEW, (0, 0))
    assert eval_orbit(orb, 0) == orb.base
    # x_7 = 7/5, y_7 = C(7,2)/5 = 21/5
    assert eval_orbit(orb, 7) == (F(2, 5), F(1, 5))
    assert torus_iterate([[1, 0], [1, 1]], [F(1, 5), F(0)], (0, 0), 7)[7] == (F(2, 5), F(1, 5))
    assert eval_orbit(polynomial_orbit(ROT13, (0,)), 6) == (F(0),)
    with pytest.raises(ValueError):
        eval_orbit(orb, -1)


def test_return_times_examples():
    assert return_times_direct(ROT13, (0,), "1/10", 12).times == (0, 3, 6, 9, 12)
    ident = TorusAffineMap.rotation("0", "0")
    assert return_times_direct(ident, ("1/3", "2/7"), "1/10", 20).times == tuple(range(21))
    d = return_times_direct(SKEW, (0, 0), "1/10", 30)
    s = return_times_symbolic(polynomial_orbit(SKEW, (0, 0)), "1/10", 30)
    assert d == s
    pts = torus_iterate([[1, 0], [1, 1]], [F(1, 5), F(0)], (0, 0), 30)
    assert list(d.times) == oracle_return_times(pts, F(1, 10))


def test_return_times_preconditions():
    orb = polynomial_orbit(ROT13, (0,))
    for bad in ("1/2", "3/4", "0", "-1/10"):
        with pytest.raises(ValueError, match="eps"):
            return_times_symbolic(orb, bad, 10)
        with pytest.raises(ValueError, match="eps"):
            return_times_direct(ROT13, (0,), bad, 10)
    assert return_times_symbolic(orb, "1/10", 0).times == (0,)
    assert return_times_direct(ROT13, (0,), "1/10", 0).times == (0,)
    with pytest.raises(ValueError):
        return_times_direct(ROT13, (0,), "1/10", -1)


def test_return_time_set_json():
    s = return_times_direct(ROT13, (0,), "1/10", 12)
    assert s.to_json() == {"window": 12, "times": [0, 3, 6, 9, 12]}
    assert 3 in s and 4 not in s and len(s) == 5


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_polynomial_orbit_random_systems(seed):
    (m, x), = _corpus.torus_corpus(1, seed=seed)
    orb = polynomial_orbit(m, x)
    assert orb.max_degree() <= m.dim
    direct = orbit(m, x, 120)
    assert direct == torus_iterate(m.A.tolist(), m.alpha, x, 120)
    assert all(eval_orbit(orb, n) == p for n, p in enumerate(direct))
    for eps in (F(1, 4), F(1, 10)):
        d = return_times_direct(m, x, eps, 300)
        s = return_times_symbolic(orb, eps, 300)
        assert d == s
        assert 0 in d
        # rebuild the set residue class by residue class from each row alone
        rebuilt = set()
        for r, row in enumerate(orb.polys):
            for t in range((300 - r) // orb.b + 1):
                if all(circle_distance(frac(p(t)), b) < eps for p, b in zip(row, orb.base)):
                    rebuilt.add(t * orb.b + r)
        assert rebuilt == set(s.times)


def test_degree_bound_tight_for_jordan_block():
    m = TorusAffineMap([[1, 0, 0], [1, 1, 0], [0, 1, 1]], ["1/7", "0", "0"])
    orb = polynomial_orbit(m, (0, 0, 0))
    assert orb.max_degree() == 3


def test_entropy_estimator_separates():
    assert entropy_estimate_separated(CAT, 12, 0.05, 10 ** 4) >= 0.5
    irr = TorusAffineMap.rotation(F(41421356, 10 ** 8))  # sqrt(2) - 1 truncated
    assert entropy_estimate_separated(irr, 20, 0.05, 10 ** 4) <= 0.2
    assert entropy_estimate_separated(TorusAffineMap.rotation("0"), 30, 0.05, 10 ** 4) <= 0.1
    assert math.isfinite(entropy_estimate_separated(ROT4, 10, 0.1, 400))
    with pytest.raises(ValueError):
        entropy_estimate_separated(CAT, 1, 0.05, 100)
