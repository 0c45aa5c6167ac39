import pytest
from hypothesis import given, strategies as st

from exacthom.errors import CoefficientMismatch, ShapeError
from exacthom.linalg import (GF, ZZ, Coefficients, FgModule, Matrix, complete_basis,
                             image_basis, inverse, invariant_factors, kernel_basis, rank,
                             smith_normal_form, solve, solve_matrix)
from exacthom.oracle import bareiss_det

from conftest import determinantal_divisors

small = st.integers(-6, 6)


def matrices(max_dim=4):
    return st.integers(1, max_dim).flatmap(
        lambda m: st.integers(1, max_dim).flatmap(
            lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=m, max_size=m)))


def test_snf_example():
    U, D, V = smith_normal_form(Matrix([[2, 4], [6, 8]]))
    assert D.tolist() == [[2, 0], [0, 4]]
    assert (U @ Matrix([[2, 4], [6, 8]]) @ V) == D


def test_snf_zero_and_empty():
    U, D, V = smith_normal_form(Matrix.zeros(2, 3))
    assert D.is_zero() and U.shape == (2, 2) and V.shape == (3, 3)
    assert invariant_factors(Matrix.zeros(0, 3)) == []


@given(matrices())
def test_snf_factorization(rows):
    A = Matrix(rows, len(rows[0]))
    U, D, V = smith_normal_form(A)
    assert U @ A @ V == D
    assert abs(bareiss_det(U.tolist())) == 1 and abs(bareiss_det(V.tolist())) == 1
    diag = [D.data[i][i] for i in range(min(A.shape))]
    off = [D.data[i][j] for i in range(A.shape[0]) for j in range(A.shape[1]) if i != j]
    assert not any(off) and all(d >= 0 for d in diag)
    nz = [d for d in diag if d]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))


@given(matrices(3))
def test_invariant_factors_match_minors(rows):
    A = Matrix(rows, len(rows[0]))
    assert invariant_factors(A) == determinantal_divisors(rows)


def test_snf_rejects_field():
    with pytest.raises(CoefficientMismatch):
        smith_normal_form(Matrix([[1]], 1, GF(3)))


@given(matrices())
def test_kernel_and_image(rows):
    A = Matrix(rows, len(rows[0]))
    K = kernel_basis(A)
    assert (A @ K).is_zero()
    assert K.shape[1] + rank(A) == A.shape[1]
    I = image_basis(A)
    assert I.shape[1] == rank(A)
    assert solve_matrix(I, A) is not None


@given(matrices(), st.lists(small, min_size=4, max_size=4))
def test_solve_integral(rows, x):
    A = Matrix(rows, len(rows[0]))
    b = A.apply(x[:A.shape[1]])
    y = solve(A, b)
    assert y is not None and A.apply(y) == b


def test_solve_infeasible_over_z_feasible_over_field():
    assert solve(Matrix([[2]]), [1]) is None
    assert solve(Matrix([[2]], 1, GF(3)), [1]) == [2]


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_field_rank(p):
    A = Matrix([[1, 2], [2, 4]], 2, GF(p))
    assert rank(A) == 1


def test_field_reduces_entries():
    assert Matrix([[5, -1]], 2, GF(3)).tolist() == [[2, 2]]


def test_inverse_and_completion():
    A = Matrix([[2, 1], [1, 1]])
    assert A @ inverse(A) == Matrix.identity(2)
    B = complete_basis(Matrix([[1], [2], [3]]))
    assert abs(bareiss_det(B.tolist())) == 1
    assert B.column(0) == [1, 2, 3]


def test_shape_errors():
    with pytest.raises(ShapeError):
        Matrix([[1, 2]]) @ Matrix([[1, 2]])
    with pytest.raises(TypeError):
        Matrix([[1.5]], 1)


def test_module_parse_and_invariants():
    M = FgModule.parse("Z^2 + Z/4 + Z/6")
    assert M.free_rank == 2 and M.torsion == (2, 12)
    assert str(FgModule.parse("0")) == "0"
    assert FgModule.from_cyclic(ZZ, 0, [2, 3]) == FgModule.parse("Z/6")
    assert Coefficients.parse("F_5") == GF(5)
