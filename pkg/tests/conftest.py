import numpy as np
import pytest

from conefree.model import ConeSpec, ProblemInstance, TripletMatrix

# 3x5 matrix with 8 nonzeros whose canonical (column-major) entry order
# enumerates the values 1..8; used throughout as a hand-checkable fixture.
DEMO_DENSE = np.array(
    [
        [1.0, 0.0, 4.0, 6.0, 8.0],
        [0.0, 0.0, 5.0, 0.0, 0.0],
        [2.0, 3.0, 0.0, 7.0, 0.0],
    ]
)


@pytest.fixture
def demo_matrix():
    return TripletMatrix.from_dense(DEMO_DENSE)


@pytest.fixture
def demo_problem(demo_matrix):
    return ProblemInstance(
        A=demo_matrix,
        b=np.zeros(3),
        c=np.zeros(5),
        cones=ConeSpec.orthant(5),
    )


def rel_err(got, want):
    got = np.asarray(got, dtype=np.float64)
    want = np.asarray(want, dtype=np.float64)
    scale = 1.0 + (np.max(np.abs(want)) if want.size else 0.0)
    diff = np.max(np.abs(got - want)) if want.size else 0.0
    return diff / scale
