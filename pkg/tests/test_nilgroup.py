import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from affinenil.matrix import Matrix
from affinenil.multipoly import MultiPoly
from affinenil.nilgroup import (
    CoordinateMap,
    UnipotentMatrix,
    check_remainder_degrees,
    commutator,
    coordinates,
    heisenberg_automorphism,
    inner_automorphism,
    level_weighted_degree,
    linear_parts,
    lower_central_series_level,
    preserves_lattice,
    reduce_mod_lattice,
    verify_homomorphism,
    xvar,
)

import _corpus
from oracles import dense_coords, dense_mul, dense_reduce, full

F = Fraction
X = {ij: MultiPoly.var(xvar(*ij)) for ij in coordinates(4)}


def rationals(den, bound=4):
    return st.builds(Fraction, st.integers(-bound * den, bound * den), st.integers(1, den))


def elements(k_max=5, den=12):
    def build(k):
        return st.lists(rationals(den), min_size=len(coordinates(k)), max_size=len(coordinates(k))).map(
            lambda vals: UnipotentMatrix(k, dict(zip(coordinates(k), vals))))
    return st.integers(1, k_max).flatmap(build)


def pairs(k_max=4):
    return st.integers(1, k_max).flatmap(lambda k: st.tuples(*(
        st.lists(rationals(9), min_size=len(coordinates(k)), max_size=len(coordinates(k))).map(
            lambda vals, k=k: UnipotentMatrix(k, dict(zip(coordinates(k), vals)))) for _ in range(3))))


@given(elements())
def test_inverse(g):
    assert (g * g.inverse()).is_identity()
    assert (g.inverse() * g).is_identity()


@given(pairs())
def test_product_matches_dense_and_is_associative(gs):
    a, b, c = gs
    assert dense_coords(dense_mul(full(a), full(b))) == (a * b).x
    assert (a * b) * c == a * (b * c)


def test_heisenberg_commutator():
    g = UnipotentMatrix(2, {(1, 1): F(2), (1, 2): F(3), (2, 1): F(1)})
    h = UnipotentMatrix(2, {(1, 1): F(5), (1, 2): F(7), (2, 1): F(4)})
    c = commutator(g, h)
    assert list(c.level(1)) == [0, 0]
    # the entry (1,3) of [g,h] = g h g^-1 h^-1 is x1 y2 - x2 y1
    assert c.x[(2, 1)] == 2 * 7 - 3 * 5
    assert commutator(g, UnipotentMatrix.identity(2)).is_identity()


def test_lower_central_series_level():
    assert lower_central_series_level(UnipotentMatrix.identity(3)) == 4
    assert lower_central_series_level(UnipotentMatrix(3, {(2, 1): F(1)})) == 2
    a = UnipotentMatrix(3, {(1, 1): F(1), (1, 2): F(2)})
    b = UnipotentMatrix(3, {(1, 2): F(1), (1, 3): F(1)})
    assert lower_central_series_level(commutator(a, b)) >= 2


def test_level_weighted_degree_examples():
    assert level_weighted_degree(X[(1, 1)] ** 2 * X[(2, 1)]) == 4
    assert level_weighted_degree(MultiPoly.const(7)) == 0
    assert level_weighted_degree(X[(3, 1)]) == 4


@settings(max_examples=50)
@given(st.lists(st.tuples(st.sampled_from(sorted(X)), st.integers(0, 2), st.integers(-3, 3)), max_size=4),
       st.lists(st.tuples(st.sampled_from(sorted(X)), st.integers(0, 2), st.integers(-3, 3)), max_size=4))
def test_level_weighted_degree_subadditive(ta, tb):
    def build(terms):
        p = MultiPoly.const(0)
        for ij, e, c in terms:
            p = p + X[ij] ** e * c
        return p
    f, g = build(ta), build(tb)
    if not f or not g:
        return
    assert level_weighted_degree(f * g) <= level_weighted_degree(f) + level_weighted_degree(g)
    if f + g:
        assert level_weighted_degree(f + g) <= max(level_weighted_degree(f), level_weighted_degree(g))


def test_inner_automorphism_examples():
    assert inner_automorphism(UnipotentMatrix.identity(3)) == CoordinateMap.identity(3)
    e12 = UnipotentMatrix(2, {(1, 1): F(1)})
    phi = inner_automorphism(e12)
    assert phi.polys[(1, 1)] == X[(1, 1)]
    assert phi.polys[(1, 2)] == X[(1, 2)]
    assert phi.polys[(2, 1)] == X[(2, 1)] + X[(1, 2)]
    assert inner_automorphism(Matrix.identity(4), 3) == CoordinateMap.identity(3)


def test_inner_automorphism_rejections():
    with pytest.raises(ValueError, match="upper triangular"):
        inner_automorphism([[1, 0], [1, 1]])
    with pytest.raises(ValueError, match="lattice"):
        inner_automorphism([[1, 0, 0], [0, 2, 0], [0, 0, 1]])
    with pytest.raises(ValueError, match="k=3"):
        inner_automorphism(Matrix.identity(3), 3)


def test_verify_homomorphism():
    assert verify_homomorphism(CoordinateMap.identity(3))
    assert verify_homomorphism(inner_automorphism(UnipotentMatrix(2, {(1, 1): F(1)})))
    polys = dict(CoordinateMap.identity(2).polys)
    polys[(2, 1)] = X[(2, 1)] ** 2
    assert not verify_homomorphism(CoordinateMap(2, polys))
    polys = dict(CoordinateMap.identity(2).polys)
    polys[(1, 1)] = X[(1, 1)] + X[(2, 1)]
    assert not verify_homomorphism(CoordinateMap(2, polys))


def test_preserves_lattice():
    assert preserves_lattice(heisenberg_automorphism([[0, -1], [1, 0]]))
    polys = dict(CoordinateMap.identity(2).polys)
    polys[(2, 1)] = X[(2, 1)] * F(1, 2)
    assert not preserves_lattice(CoordinateMap(2, polys))


def test_linear_parts():
    lp = linear_parts(CoordinateMap.identity(3))
    assert [lp[i] for i in (1, 2, 3)] == [Matrix.identity(3), Matrix.identity(2), Matrix.identity(1)]
    lp = linear_parts(inner_automorphism(UnipotentMatrix(2, {(1, 1): F(1)})))
    assert lp[1] == Matrix.identity(2) and lp[2] == Matrix.identity(1)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 4))
def test_linear_parts_functorial(seed, k):
    rng = random.Random(seed)
    a = _corpus.random_inner_composition(rng, k, 2)
    b = _corpus.random_inner_composition(rng, k, 2)
    la, lb, lab = linear_parts(a), linear_parts(b), linear_parts(a.compose(b))
    assert all(lab[i] == la[i] @ lb[i] for i in range(1, k + 1))


def test_remainder_examples():
    checks = check_remainder_degrees(CoordinateMap.identity(3))
    assert all(c.holds and not c.remainder for c in checks)
    checks = check_remainder_degrees(inner_automorphism(UnipotentMatrix(2, {(1, 1): F(1)})))
    top = [c for c in checks if c.i == 2][0]
    assert top.remainder == X[(1, 2)]
    assert top.degree == 1 and top.bound == 2 and top.holds
    rot = [c for c in check_remainder_degrees(heisenberg_automorphism([[0, -1], [1, 0]])) if c.i == 2][0]
    assert rot.tight and rot.holds


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 4))
def test_symbolic_homomorphism_implies_numeric(seed, k):
    rng = random.Random(seed)
    phi = _corpus.random_inner_composition(rng, k)
    assert verify_homomorphism(phi)
    assert all(c.holds for c in check_remainder_degrees(phi))
    for _ in range(3):
        g = _corpus.random_nil_point(rng, k, 20)
        h = _corpus.random_nil_point(rng, k, 20)
        assert phi(g * h) == phi(g) * phi(h)


def test_reduce_mod_lattice_examples():
    g = UnipotentMatrix(2, {(1, 1): F(1), (1, 2): F(1), (2, 1): F(5, 4)})
    q, gamma = reduce_mod_lattice(g)
    assert q.x == {(1, 1): 0, (1, 2): 0, (2, 1): F(1, 4)}
    assert gamma.x == {(1, 1): 1, (1, 2): 1, (2, 1): 1}
    frac_g = UnipotentMatrix(2, {(1, 1): F(1, 3), (1, 2): F(0), (2, 1): F(1, 2)})
    assert reduce_mod_lattice(frac_g) == (frac_g, UnipotentMatrix.identity(2))
    int_g = UnipotentMatrix(3, {ij: F(v) for ij, v in zip(coordinates(3), (1, -2, 3, 4, 0, -1))})
    assert reduce_mod_lattice(int_g) == (UnipotentMatrix.identity(3), int_g)


@given(elements(k_max=4, den=20))
def test_reduce_mod_lattice_properties(g):
    q, gamma = reduce_mod_lattice(g)
    assert q * gamma == g
    assert q.is_fractional() and gamma.is_integral()
    dq, dgamma = dense_reduce(full(g))
    assert dense_coords(dq) == q.x and dense_coords(dgamma) == gamma.x


@settings(max_examples=30)
@given(elements(k_max=4, den=20), st.integers(0, 10 ** 6))
def test_reduce_mod_lattice_unique(g, seed):
    q, gamma = reduce_mod_lattice(g)
    rng = random.Random(seed)
    other = _corpus.random_unipotent(rng, g.k, -2, 2)
    if other == gamma:
        return
    assert not (g * other.inverse()).is_fractional()


def test_coordinate_map_json_round_trip():
    phi = heisenberg_automorphism([[1, 1], [0, 1]]).compose(inner_automorphism(UnipotentMatrix(2, {(1, 2): F(2)})))
    assert CoordinateMap.parse(2, phi.to_json()) == phi
    g = UnipotentMatrix.parse(2, {"1,1": "1/2", "2,1": 3})
    assert g.x == {(1, 1): F(1, 2), (1, 2): 0, (2, 1): 3}
    assert UnipotentMatrix.parse(2, g.to_json()) == g
    with pytest.raises(ValueError):
        UnipotentMatrix.parse(2, {"3,1": 1})
