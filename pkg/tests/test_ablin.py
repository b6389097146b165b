import pytest
from hypothesis import given, strategies as st

from gogfold import ablin as A
from gogfold.errors import DimensionMismatch

from oracles import sympy_snf_diagonal
from strategies import int_matrices


def test_snf_example():
    U, D, V = A.smith_normal_form([[2, 0], [0, 3]])
    assert A.diagonal(D) == [1, 6]
    assert A.matmul(A.matmul(U, [[2, 0], [0, 3]]), V) == D


def test_lattice_member_example():
    L = A.Lattice.span([(2, 0), (0, 1)], 2)
    c = A.lattice_member(L, (4, 3))
    assert c is not None
    assert A.vecmat(c, [list(r) for r in L.basis]) == [4, 3]
    assert A.solve([(2, 0), (0, 1)], (4, 3)) == [2, 3]
    assert A.lattice_member(L, (1, 0)) is None


def test_free_rank_of_quotient_example():
    assert A.free_rank_of_quotient(4, [(1, 0, 0, 0)]) == 3
    assert A.free_rank_of_quotient(2, [(2, 0)]) == 1


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        A.free_rank_of_quotient(3, [(1, 0)])
    with pytest.raises(DimensionMismatch):
        A.lattice_member(A.Lattice.span([(1, 0)], 2), (1, 0, 0))


@given(int_matrices())
def test_snf_is_a_unimodular_diagonalisation(M):
    U, D, V = A.smith_normal_form(M)
    assert A.matmul(A.matmul(U, M), V) == D
    assert abs(A.det(U)) == 1 and abs(A.det(V)) == 1
    for i, row in enumerate(D):
        for j, x in enumerate(row):
            assert i == j or x == 0
    d = A.diagonal(D)
    assert all(x >= 0 for x in d)
    for x, y in zip(d, d[1:]):
        assert (x == 0 and y == 0) or (x != 0 and y % x == 0)


@given(int_matrices())
def test_snf_matches_sympy(M):
    _, D, _ = A.smith_normal_form(M)
    assert A.diagonal(D) == sympy_snf_diagonal(M)


@given(int_matrices())
def test_hermite_and_kernel(M):
    H, U = A.hermite(M)
    assert A.matmul(U, M) == H
    assert abs(A.det(U)) == 1
    for x in A.left_kernel(M):
        assert not any(A.vecmat(x, M))
    assert len(A.left_kernel(M)) == len(M) - A.rank(M)


@given(int_matrices(max_rows=3, max_cols=3),
       st.lists(st.integers(-3, 3), min_size=3, max_size=3))
def test_solve_recovers_combinations(M, c):
    c = c[:len(M)]
    v = A.vecmat(c, M)
    x = A.solve(M, v)
    assert x is not None and A.vecmat(x, M) == v


@given(st.lists(st.lists(st.integers(-5, 5), min_size=2, max_size=2), max_size=3),
       st.lists(st.integers(-5, 5), min_size=2, max_size=2))
def test_least_multiple(vecs, v):
    L = A.Lattice.span(vecs, 2)
    k = L.least_multiple(v)
    if k is not None:
        assert [k * x for x in v] in L
        assert all([j * x for x in v] not in L for j in range(1, k))
