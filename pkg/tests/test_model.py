import numpy as np
import pytest

from conefree.model import ConeSpec, ProblemInstance, TripletMatrix, validate


def problem_with(matrix, b=None, c=None, cones=None):
    m, n = matrix.num_rows, matrix.num_cols
    return ProblemInstance(
        A=matrix,
        b=np.zeros(m) if b is None else b,
        c=np.zeros(n) if c is None else c,
        cones=ConeSpec.orthant(n) if cones is None else cones,
    )


def test_demo_problem_validates(demo_problem):
    rep = validate(demo_problem)
    assert rep.ok
    assert rep.violations == ()


def test_cone_sum_mismatch(demo_matrix):
    p = problem_with(demo_matrix, cones=ConeSpec((4,)))
    rep = validate(p)
    assert not rep.ok
    assert any("sum 4" in v and "n=5" in v for v in rep.violations)


def test_duplicate_entry_flagged():
    a = TripletMatrix(2, 2, [0, 0, 1], [0, 0, 1], [1.0, 2.0, 3.0])
    rep = validate(problem_with(a))
    assert not rep.ok
    assert any("duplicate" in v for v in rep.violations)


def test_out_of_range_indices_flagged():
    a = TripletMatrix(2, 2, [0, 5], [0, 1], [1.0, 2.0])
    rep = validate(problem_with(a))
    assert any("row index 5" in v for v in rep.violations)
    a = TripletMatrix(2, 2, [0, 1], [0, -1], [1.0, 2.0])
    rep = validate(problem_with(a))
    assert any("column index -1" in v for v in rep.violations)


def test_zero_and_nonfinite_values_flagged():
    a = TripletMatrix(2, 2, [0, 1], [0, 1], [0.0, 2.0])
    assert any("zero value" in v for v in validate(problem_with(a)).violations)
    a = TripletMatrix(2, 2, [0, 1], [0, 1], [np.nan, 2.0])
    assert any("not finite" in v for v in validate(problem_with(a)).violations)


def test_bad_vector_lengths_and_values(demo_matrix):
    p = problem_with(demo_matrix, b=np.zeros(2))
    assert any("b has length 2" in v for v in validate(p).violations)
    p = problem_with(demo_matrix, c=np.array([0.0, 0, 0, 0, np.inf]))
    assert any("c[4]" in v for v in validate(p).violations)


def test_empty_row_is_warning_not_error():
    a = TripletMatrix(3, 2, [0, 2], [0, 1], [1.0, 2.0])
    rep = validate(problem_with(a))
    assert rep.ok
    assert any("row 1" in w for w in rep.warnings)


def test_cone_block_size_below_one():
    a = TripletMatrix(1, 2, [0, 0], [0, 1], [1.0, 2.0])
    rep = validate(problem_with(a, cones=ConeSpec((0, 2))))
    assert any("size 0" in v for v in rep.violations)


def test_validate_is_pure(demo_problem):
    first = validate(demo_problem)
    second = validate(demo_problem)
    assert first == second


def test_containers_are_immutable(demo_problem):
    with pytest.raises(ValueError):
        demo_problem.A.vals[0] = 9.0
    with pytest.raises(ValueError):
        demo_problem.b[0] = 1.0


def test_from_dense_round_trip(demo_matrix):
    dense = demo_matrix.to_dense()
    again = TripletMatrix.from_dense(dense)
    assert np.array_equal(again.to_dense(), dense)
    assert again.nnz == 8


def test_mismatched_triplet_lengths_rejected():
    with pytest.raises(ValueError):
        TripletMatrix(2, 2, [0, 1], [0], [1.0, 2.0])
