from fractions import Fraction

import pytest

from deform.errors import ResourceLimit, ShapeError
from deform.linalg import (Matrix, Subquotient, extend_basis, span_basis,
                           span_matrix, vec_add, vec_eq, vec_scale, vec_sub)


def test_matrix_arithmetic():
    a = Matrix.from_rows([[1, 2], [3, 4]])
    b = Matrix.from_rows([[0, 1], [1, 0]])
    assert a + b == Matrix.from_rows([[1, 3], [4, 4]])
    assert a - a == Matrix.zero(2, 2)
    assert a * b == Matrix.from_rows([[2, 1], [4, 3]])
    assert a.scale(Fraction(1, 2)) == Matrix.from_rows(
        [[Fraction(1, 2), 1], [Fraction(3, 2), 2]])
    assert a.transpose() == Matrix.from_rows([[1, 3], [2, 4]])
    assert (Matrix.identity(2) * a) == a


def test_shape_errors():
    a = Matrix.from_rows([[1, 2]])
    b = Matrix.from_rows([[1], [2], [3]])
    with pytest.raises(ShapeError):
        a * b
    with pytest.raises(ShapeError):
        a + b


def test_rref_and_rank():
    m = Matrix.from_rows([[1, 2, 3], [2, 4, 6], [1, 1, 1]])
    red, pivots = m.rref()
    assert pivots == [0, 1]
    assert m.rank() == 2
    assert Matrix.zero(3, 3).rank() == 0
    assert Matrix.identity(5).rank() == 5


def test_rref_sparse_path_matches_dense():
    # 40x40 identity-based matrix goes through the sparse branch
    ent = {(i, i): Fraction(1) for i in range(40)}
    ent[(0, 39)] = Fraction(2)
    m = Matrix(40, 40, ent)
    assert m.rank() == 40
    small = Matrix.from_rows([[1 if i == j else 0 for j in range(5)]
                              for i in range(5)])
    assert small.rank() == 5


def test_nullspace_and_solve():
    m = Matrix.from_rows([[1, 2, 0], [0, 0, 1]])
    ns = m.nullspace()
    assert len(ns) == 1
    for v in ns:
        assert not m.apply(v)
    sol = m.solve({0: Fraction(3), 1: Fraction(5)})
    assert sol is not None
    assert vec_eq(m.apply(sol), {0: Fraction(3), 1: Fraction(5)})
    # inconsistent system
    m2 = Matrix.from_rows([[1, 0], [1, 0]])
    assert m2.solve({0: Fraction(1), 1: Fraction(2)}) is None


def test_solve_full_parameterizes_all_solutions():
    m = Matrix.from_rows([[1, 1, 0], [0, 0, 0]])
    b = {0: Fraction(2)}
    part, null = m.solve_full(b)
    assert vec_eq(m.apply(part), b)
    assert len(null) == 2
    for v in null:
        assert vec_eq(m.apply(vec_add(part, v)), b)


def test_exactness_no_rounding():
    # Hilbert-style matrix has huge intermediate denominators; exact rank 4
    m = Matrix.from_rows([[Fraction(1, i + j + 1) for j in range(4)]
                          for i in range(4)])
    assert m.rank() == 4
    sol = m.solve({i: Fraction(1) for i in range(4)})
    assert vec_eq(m.apply(sol), {i: Fraction(1) for i in range(4)})


def test_span_and_extend():
    v1 = {0: Fraction(1), 1: Fraction(1)}
    v2 = {0: Fraction(2), 1: Fraction(2)}
    v3 = {1: Fraction(1)}
    basis = span_basis([v1, v2, v3], 3)
    assert len(basis) == 2
    ext = extend_basis([v1], [v1, v2, v3], 3)
    assert len(ext) == 1
    assert span_matrix(basis, 3).transpose().rank() == 2


def test_subquotient():
    # inside Q^3: cycles = span(e0, e1), boundaries = span(e0)
    cycles = [{0: Fraction(1)}, {1: Fraction(1)}]
    boundaries = [{0: Fraction(1)}]
    sq = Subquotient(cycles, boundaries, 3)
    assert sq.dimension == 1
    z = {0: Fraction(5), 1: Fraction(2)}
    coords = sq.coordinates(z)
    assert coords == [Fraction(2)]
    assert sq.is_trivial({0: Fraction(7)})
    assert not sq.is_trivial(z)
    assert sq.coordinates({2: Fraction(1)}) is None


def test_vector_helpers():
    u = {0: Fraction(1)}
    v = {0: Fraction(-1), 1: Fraction(2)}
    assert vec_add(u, v) == {1: Fraction(2)}
    assert vec_sub(u, u) == {}
    assert vec_scale(v, 0) == {}


def test_resource_limit(monkeypatch):
    monkeypatch.setenv("DEFORM_MATRIX_LIMIT", "10")
    with pytest.raises(ResourceLimit):
        Matrix.zero(100, 100)
