"""
Residues, Beurling sequence entries, lcm periods, and the residue matrix.

Rows of the residue matrix are indexed i = 1..M and columns k = 2..n (in
that order). The Residue convention stores i mod k; the Fractional
convention stores the fractional part {i/k} = (i mod k)/k.
"""

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .config import settings
from .errors import MatrixSizeError, PreconditionError
from .linalg import DenseMatrix


class Convention(Enum):
    RESIDUE = "residue"
    FRACTIONAL = "fractional"


@dataclass(frozen=True)
class ResidueSpec:
    n: int
    M: int
    convention: Convention = Convention.RESIDUE

    def __post_init__(self):
        if self.n < 2:
            raise PreconditionError(f"n must be at least 2, got {self.n}")
        if self.M < 1:
            raise PreconditionError(f"M must be at least 1, got {self.M}")

    @property
    def columns(self):
        return range(2, self.n + 1)


@dataclass(frozen=True)
class CoefficientVector:
    """Coefficients a_k for k = 2..n, tagged with the matrix convention they multiply."""
    values: tuple
    convention: Convention

    def __post_init__(self):
        # float coefficients come from the weighted (float) fits; everything else is exact
        object.__setattr__(self, "values", tuple(float(v) if isinstance(v, float) else Fraction(v)
                                                 for v in self.values))
        if not self.values:
            raise PreconditionError("coefficient vector must cover at least k = 2")

    @property
    def n(self):
        return len(self.values) + 1

    def as_strings(self):
        return [str(v) if isinstance(v, Fraction) else repr(v) for v in self.values]


@dataclass(frozen=True)
class RowPartition:
    j_rows: tuple
    zero_rows: tuple


def lcm_upto(n):
    """L_n, the least common multiple of 1..n."""
    if n < 1:
        raise PreconditionError(f"lcm_upto needs n >= 1, got {n}")
    return math.lcm(*range(1, n + 1))


def row_count_default(n):
    """The natural row range 1..L_n - 1."""
    return lcm_upto(n) - 1


def residue(i, k):
    if k < 1:
        raise PreconditionError(f"modulus must be at least 1, got {k}")
    if i < 0:
        raise PreconditionError(f"row index must be nonnegative, got {i}")
    return i % k


def beurling_entry(i, k):
    """{i/k} as an exact rational in [0, 1)."""
    if k < 2:
        raise PreconditionError(f"Beurling denominators start at 2, got {k}")
    if i < 1:
        raise PreconditionError(f"row index must be at least 1, got {i}")
    return Fraction(residue(i, k), k)


def build_matrix(spec, cap=None):
    """M x (n-1) residue matrix in the requested convention."""
    cap = settings.row_cap if cap is None else cap
    cols = spec.n - 1
    if spec.M * cols > cap:
        raise MatrixSizeError(spec.M, cols, cap)

    if spec.convention is Convention.RESIDUE:
        entries = tuple(Fraction(i % k) for i in range(1, spec.M + 1) for k in spec.columns)
    else:
        entries = tuple(Fraction(i % k, k) for i in range(1, spec.M + 1) for k in spec.columns)
    return DenseMatrix(spec.M, cols, entries)


def constant_vector(M):
    if M < 1:
        raise PreconditionError(f"M must be at least 1, got {M}")
    return (Fraction(1),) * M


def classify_rows(n, M):
    """
    Split rows 1..M into the J rows and the rows divisible by L_n.

    On a row i with L_n | i every Beurling entry vanishes, so the residual to
    the constant sequence is exactly -1 there whatever the coefficients.
    """
    if n < 2:
        raise PreconditionError(f"n must be at least 2, got {n}")
    period = lcm_upto(n)
    zero_rows = tuple(range(period, M + 1, period))
    j_rows = tuple(i for i in range(1, M + 1) if i % period)
    return RowPartition(j_rows=j_rows, zero_rows=zero_rows)


def convert_coefficients(a, target):
    """
    Rescale coefficients between conventions so that Σ a_k·entry(i, k) is unchanged:
    value_residue(k) = value_fractional(k) / k.
    """
    if a.convention is target:
        return a
    ks = range(2, a.n + 1)
    if target is Convention.RESIDUE:
        values = tuple(v / k for v, k in zip(a.values, ks))
    else:
        values = tuple(v * k for v, k in zip(a.values, ks))
    return CoefficientVector(values, target)


def format_matrix(matrix):
    """Text form: "ROWS COLS" then one line per row of "p/q" tokens."""
    lines = [f"{matrix.rows} {matrix.cols}"]
    lines.extend(" ".join(str(x) for x in matrix.row(i)) for i in range(matrix.rows))
    return "\n".join(lines) + "\n"


def parse_matrix(text):
    lines = [line.split() for line in text.splitlines() if line.strip()]
    if not lines or len(lines[0]) != 2:
        raise PreconditionError("matrix text must start with a 'ROWS COLS' header")
    try:
        rows, cols = (int(tok) for tok in lines[0])
    except ValueError as e:
        raise PreconditionError(f"bad matrix header {' '.join(lines[0])!r}") from e
    body = lines[1:]
    if len(body) != rows:
        raise PreconditionError(f"header announces {rows} rows, found {len(body)}")
    entries = []
    for number, tokens in enumerate(body, start=1):
        if len(tokens) != cols:
            raise PreconditionError(f"row {number} has {len(tokens)} entries, expected {cols}")
        try:
            entries.extend(Fraction(tok) for tok in tokens)
        except (ValueError, ZeroDivisionError) as e:
            raise PreconditionError(f"row {number}: {e}") from e
    return DenseMatrix(rows, cols, tuple(entries))
