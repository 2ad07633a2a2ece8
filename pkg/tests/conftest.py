import sys
from fractions import Fraction
from pathlib import Path

import pytest

# Add project root to path so tests import src/ the same way the scripts do
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.linalg import DenseMatrix
from src.sequences import ResidueSpec, build_matrix


@pytest.fixture
def a35():
    """A(3, 5) in the residue convention."""
    return build_matrix(ResidueSpec(3, 5))


@pytest.fixture
def ones5():
    return (Fraction(1),) * 5


@pytest.fixture
def column_101():
    return DenseMatrix.from_rows([[1], [0], [1]])
