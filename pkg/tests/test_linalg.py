from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, seed, settings, strategies as st

from src.errors import NonConvergence, PreconditionError, RankDeficient, Singular
from src.linalg import (DenseMatrix, as_fraction, determinant_exact, gram, op_norm_2, op_norm_inf,
                        penrose_check, projection, projection_inf_norm, pseudoinverse, rank_exact,
                        solve_exact)
from src.sequences import Convention, ResidueSpec, build_matrix, row_count_default


def natural(n, convention=Convention.RESIDUE):
    return build_matrix(ResidueSpec(n, row_count_default(n), convention))


def test_as_fraction_refuses_floats():
    assert as_fraction("3/4") == Fraction(3, 4)
    with pytest.raises(PreconditionError):
        as_fraction(0.5)


def test_gram_n3(a35):
    assert gram(a35).to_rows() == [[3, 3], [3, 10]]


@pytest.mark.parametrize("n", range(2, 11))
def test_natural_matrix_has_full_column_rank(n):
    assert rank_exact(natural(n)) == n - 1


def test_rank_of_dependent_columns():
    assert rank_exact(DenseMatrix.from_rows([[1, 2], [2, 4], [3, 6]])) == 1
    assert rank_exact(DenseMatrix.from_rows([[0, 0], [0, 0]])) == 0


def test_rank_is_convention_independent():
    assert rank_exact(natural(5, Convention.FRACTIONAL)) == rank_exact(natural(5))


def test_determinant_exact():
    assert determinant_exact(DenseMatrix.from_rows([[2, 1], [1, 3]])) == 5
    assert determinant_exact(DenseMatrix.from_rows([[0, 1], [1, 0]])) == -1
    assert determinant_exact(DenseMatrix.from_rows([[1, 2], [2, 4]])) == 0
    assert determinant_exact(DenseMatrix.from_rows([["1/2", 0], [0, "1/3"]])) == Fraction(1, 6)


def test_solve_exact_vector_and_singular():
    S = DenseMatrix.from_rows([[3, 3], [3, 10]])
    assert solve_exact(S, [3, 6]) == (Fraction(4, 7), Fraction(3, 7))
    with pytest.raises(Singular):
        solve_exact(DenseMatrix.from_rows([[1, 2], [2, 4]]), [1, 1])


def test_pseudoinverse_rejects_rank_deficiency():
    with pytest.raises(RankDeficient) as info:
        pseudoinverse(DenseMatrix.from_rows([[1, 2], [2, 4], [3, 6]]))
    assert info.value.rank == 1


@pytest.mark.parametrize("n", range(2, 7))
def test_penrose_identities_hold_exactly(n):
    A = natural(n)
    assert penrose_check(A, pseudoinverse(A)).all_hold


def test_penrose_check_reports_the_failing_identities(a35):
    Aplus = pseudoinverse(a35)
    wrong = DenseMatrix(Aplus.rows, Aplus.cols, (Aplus.entries[0] + 1,) + Aplus.entries[1:])
    check = penrose_check(a35, wrong)
    assert not check.all_hold
    assert 1 in check.failed


def test_projection_golden_values(a35, ones5):
    P = projection(a35)
    assert list(P.row(0)) == [Fraction(1, 3), 0, Fraction(1, 3), 0, Fraction(1, 3)]
    assert P.matvec(ones5) == (1, Fraction(6, 7), Fraction(4, 7), Fraction(3, 7), Fraction(10, 7))
    assert P.is_symmetric()
    assert P @ P == P
    assert P.trace() == 2
    assert op_norm_inf(P) == Fraction(10, 7)
    assert abs(op_norm_2(P) - 1.0) <= 1e-8


@pytest.mark.parametrize("n", [3, 4, 5])
@pytest.mark.parametrize("convention", list(Convention))
def test_projection_inf_norm_matches_the_full_projector(n, convention):
    A = natural(n, convention)
    assert projection_inf_norm(A) == op_norm_inf(projection(A))


def test_op_norm_inf_float_mirror(a35):
    assert op_norm_inf(projection(a35).to_float()) == pytest.approx(10 / 7)


def test_op_norm_2_simple_cases():
    assert op_norm_2(np.zeros((3, 3))) == 0.0
    assert op_norm_2(np.diag([3.0, 1.0])) == pytest.approx(3.0, rel=1e-10)
    assert op_norm_2(np.array([[1.0, -1.0], [-1.0, 1.0]])) == pytest.approx(2.0, rel=1e-10)


def test_op_norm_2_iteration_cap():
    with pytest.raises(NonConvergence):
        op_norm_2(np.diag([3.0, 1.0]), max_iter=1)


small_matrices = st.integers(min_value=1, max_value=3).flatmap(
    lambda cols: st.lists(
        st.lists(st.integers(min_value=-4, max_value=4), min_size=cols, max_size=cols),
        min_size=cols + 1, max_size=6,
    )
)


@seed(2025)
@settings(max_examples=40, deadline=None)
@given(small_matrices)
def test_penrose_identities_on_random_full_rank_matrices(rows):
    A = DenseMatrix.from_rows(rows)
    assume(rank_exact(A) == A.cols)
    Aplus = pseudoinverse(A)
    assert penrose_check(A, Aplus).all_hold
    np.testing.assert_allclose(Aplus.to_float(), np.linalg.pinv(A.to_float()), atol=1e-9)
