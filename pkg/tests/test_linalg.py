from fractions import Fraction as F
from itertools import permutations, product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gmak.linalg import (
    Feasible,
    Infeasible,
    QMatrix,
    SignConstrainedSystem,
    bareiss_det,
    det,
    feasible,
    image_basis,
    in_span,
    intersect_subspaces,
    inverse,
    kernel_basis,
    minor,
    orthogonal_basis,
    orthogonal_complement,
    primitive_integer_vector,
    rank,
    same_span,
)

small = st.integers(-3, 3)


def matrices(rows, cols):
    return st.lists(st.lists(small, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


def leibniz(rows):
    n = len(rows)
    total = F(0)
    for p in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])
        term = F(1)
        for i in range(n):
            term *= rows[i][p[i]]
        total += -term if inv % 2 else term
    return total


def test_basic_ops():
    A = QMatrix([[1, 2], [3, 4]])
    assert (A @ QMatrix.identity(2)) == A
    assert A.T == QMatrix([[1, 3], [2, 4]])
    assert det(A) == -2
    assert inverse(A) @ A == QMatrix.identity(2)
    assert QMatrix.zeros(0, 3).shape == (0, 3)


def test_singular_inverse_raises():
    with pytest.raises(ZeroDivisionError):
        inverse(QMatrix([[1, 2], [2, 4]]))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: matrices(n, n)))
def test_det_matches_leibniz(rows):
    assert det(QMatrix(rows)) == leibniz([[F(x) for x in r] for r in rows])
    assert bareiss_det([list(r) for r in rows]) == leibniz(rows)


@settings(max_examples=40, deadline=None)
@given(matrices(4, 4), st.sets(st.integers(0, 3), min_size=1), st.sets(st.integers(0, 3), min_size=1))
def test_minor_matches_cofactor_oracle(rows, r, c):
    k = min(len(r), len(c))
    r, c = sorted(r)[:k], sorted(c)[:k]
    sub = [[F(rows[i][j]) for j in c] for i in r]
    assert minor(QMatrix(rows), r, c) == leibniz(sub)


def test_empty_minor_is_one():
    assert minor(QMatrix([[5]]), [], []) == 1


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4).flatmap(lambda r: st.integers(1, 4).flatmap(lambda c: matrices(r, c))))
def test_rank_nullity_and_kernel(rows):
    M = QMatrix(rows)
    K = kernel_basis(M)
    assert rank(M) + K.cols == M.cols
    assert (M @ K).is_zero()
    assert image_basis(M).cols == rank(M)
    perp = orthogonal_complement(image_basis(M))
    assert (image_basis(M).T @ perp).is_zero()
    assert perp.cols + rank(M) == M.rows


def test_span_helpers():
    B = QMatrix.from_columns([[1, 1, 0], [0, 1, 1]], 3)
    assert in_span(B, [1, 2, 1])
    assert not in_span(B, [1, 0, 0])
    assert same_span(B, QMatrix.from_columns([[1, 2, 1], [1, 0, -1]], 3))
    X = intersect_subspaces(B, QMatrix.from_columns([[1, 0, 0], [0, 1, 0]], 3))
    assert X.cols == 1 and in_span(X, [1, 1, 0])


def test_orthogonal_basis_unnormalised():
    B = orthogonal_basis(QMatrix.from_columns([[1, 1, 0], [1, 0, 1]], 3))
    assert B.col(0) == (1, 1, 0)
    assert sum(a * b for a, b in zip(B.col(0), B.col(1))) == 0
    with pytest.raises(ValueError):
        orthogonal_basis(QMatrix.from_columns([[1, 1], [2, 2]], 2))


def test_primitive_integer_vector():
    assert primitive_integer_vector([F(1, 2), F(-3, 4), 0]) == (2, -3, 0)


def grid_oracle(sys: SignConstrainedSystem, values=(-2, -1, F(-1, 2), 0, F(1, 2), 1, 2)):
    """Finite search: a hit proves feasibility, a miss proves nothing."""
    for z in product(values, repeat=sys.dim):
        if sys.check(z):
            return z
    return None


@settings(max_examples=80, deadline=None)
@given(
    st.integers(1, 3).flatmap(
        lambda d: st.tuples(
            st.just(d),
            st.lists(st.lists(small, min_size=d, max_size=d), min_size=1, max_size=3),
            st.lists(st.lists(small, min_size=d, max_size=d), max_size=2),
            st.lists(st.lists(small, min_size=d, max_size=d), max_size=2),
        )
    )
)
def test_feasible_agrees_with_grid_and_certificates(args):
    d, strict, nonneg, zero = args
    sys = SignConstrainedSystem.build(d, strict=strict, nonneg=nonneg, zero=zero)
    res = feasible(sys)
    if isinstance(res, Feasible):
        assert sys.check(res.witness)
    else:
        assert isinstance(res, Infeasible)
        assert res.verify(sys)
        assert grid_oracle(sys) is None


def test_feasible_examples():
    # x > 0, y > 0, x + y = 0 is infeasible
    sys = SignConstrainedSystem.build(2, strict=[[1, 0], [0, 1]], zero=[[1, 1]])
    res = feasible(sys)
    assert isinstance(res, Infeasible) and res.verify(sys)
    sys = SignConstrainedSystem.build(2, strict=[[1, -1]], nonneg=[[0, 1]])
    res = feasible(sys)
    assert isinstance(res, Feasible) and sys.check(res.witness)
