from fractions import Fraction as F
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gmak.linalg import QMatrix, minor
from gmak.poly import ParametricMatrix, Poly, polynomial_from_dict

NV = 3
coeff = st.fractions(min_value=-5, max_value=5, max_denominator=4)
mono = st.tuples(*[st.integers(0, 2)] * NV)
polys = st.dictionaries(mono, coeff, max_size=5).map(lambda d: Poly(NV, d))
points = st.tuples(*[st.fractions(min_value=-3, max_value=3, max_denominator=5)] * NV)


@settings(max_examples=100, deadline=None)
@given(polys, polys, points)
def test_ring_operations_commute_with_evaluation(p, q, x):
    assert (p + q).evaluate(x) == p.evaluate(x) + q.evaluate(x)
    assert (p - q).evaluate(x) == p.evaluate(x) - q.evaluate(x)
    assert (p * q).evaluate(x) == p.evaluate(x) * q.evaluate(x)
    assert (-p).evaluate(x) == -p.evaluate(x)
    assert (p - p).is_zero()


@settings(max_examples=60, deadline=None)
@given(polys)
def test_content_splits_positive_factor(p):
    c, prim = p.content()
    assert c > 0
    assert Poly(NV, {m: v * c for m, v in prim.terms.items()}) == p
    if not p.is_zero():
        assert all(v.denominator == 1 for v in prim.terms.values())


def test_zero_coefficients_are_dropped():
    p = Poly(2, {(1, 0): 0, (0, 1): F(1, 2)})
    assert p.terms == {(0, 1): F(1, 2)}
    assert Poly(2).is_zero() and Poly(2).coefficients_nonnegative()


def test_arity_checked():
    with pytest.raises(ValueError):
        Poly(2, {(1,): 1})


def test_format():
    p = polynomial_from_dict(["a", "b"], {"a": 2, "b": -1, "1": 3})
    assert p.format(["a", "b"]) == "2*a - b + 3"
    assert (Poly.var(2, 0) * Poly.var(2, 0)).format(["a", "b"]) == "a^2"
    assert Poly(2).format(["a", "b"]) == "0"


@settings(max_examples=30, deadline=None)
@given(
    st.lists(st.lists(st.integers(-2, 2), min_size=3, max_size=3), min_size=2, max_size=2),
    st.lists(st.fractions(min_value=F(1, 4), max_value=4, max_denominator=4), min_size=2, max_size=2),
)
def test_parametric_minors_match_evaluated_minors(seeds, pt):
    mats = [QMatrix([[s[(i + j) % 3] * (i - j + 1) for j in range(3)] for i in range(3)]) for s in seeds]
    P = ParametricMatrix.linear_combination(["a", "b"], mats)
    E = P.evaluate(pt)
    assert E == mats[0].scale(pt[0]) + mats[1].scale(pt[1])
    for k in range(1, 4):
        for r in combinations(range(3), k):
            for c in combinations(range(3), k):
                assert P.minor(r, c).evaluate(pt) == minor(E, list(r), list(c))


def test_parametric_matrix_validation():
    with pytest.raises(ValueError):
        ParametricMatrix(["a"], [[Poly(1), Poly(1)]])
    with pytest.raises(ValueError):
        ParametricMatrix(["a"], [[Poly(2)]])
    P = ParametricMatrix.zeros(["a"], 2)
    assert P.is_zero() and (-P) == P
    with pytest.raises(ValueError):
        P.evaluate([1, 2])
    with pytest.raises(ValueError):
        P.minor([0], [0, 1])
    assert P.minor([], []).evaluate([5]) == 1
