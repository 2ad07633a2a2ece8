"""
Exact-rational dense linear algebra with a float64 mirror.

Exact matrices are `DenseMatrix` instances holding `fractions.Fraction`
entries in row-major order. Float matrices are plain `numpy.ndarray`s; they
are only ever used for norms and large solves, never for rank decisions.
"""

import logging
import math
import operator
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .config import settings
from .errors import NonConvergence, PreconditionError, RankDeficient, Singular

logger = logging.getLogger(__name__)


def as_fraction(value):
    """Coerce ints, Fractions and "p/q" strings to a Fraction (floats are refused)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise PreconditionError(f"refusing inexact entry {value!r}")
    return Fraction(value)


@dataclass(frozen=True)
class DenseMatrix:
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0 or self.rows * self.cols != len(self.entries):
            raise PreconditionError(
                f"{self.rows} x {self.cols} matrix needs {self.rows * self.cols} entries, "
                f"got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows):
        rows = [list(r) for r in rows]
        if not rows:
            return cls(0, 0, ())
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise PreconditionError("ragged rows")
        entries = tuple(as_fraction(x) for r in rows for x in r)
        return cls(len(rows), width, entries)

    @classmethod
    def from_columns(cls, columns):
        return cls.from_rows(zip(*columns)) if columns else cls(0, 0, ())

    @classmethod
    def zeros(cls, rows, cols):
        return cls(rows, cols, (Fraction(0),) * (rows * cols))

    @classmethod
    def identity(cls, size):
        return cls(size, size, tuple(Fraction(int(i == j)) for i in range(size) for j in range(size)))

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, index):
        i, j = index
        return self.entries[i * self.cols + j]

    def row(self, i):
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j):
        return self.entries[j::self.cols] if self.cols else ()

    def to_rows(self):
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def T(self):
        return DenseMatrix(self.cols, self.rows,
                           tuple(self.entries[i * self.cols + j]
                                 for j in range(self.cols) for i in range(self.rows)))

    def is_integral(self):
        return all(x.denominator == 1 for x in self.entries)

    def matvec(self, vector):
        vector = [as_fraction(x) for x in vector]
        if len(vector) != self.cols:
            raise PreconditionError(f"vector of length {len(vector)} for {self.cols} columns")
        return tuple(_dot(self.row(i), vector) for i in range(self.rows))

    def __matmul__(self, other):
        if not isinstance(other, DenseMatrix):
            return self.matvec(other)
        if self.cols != other.rows:
            raise PreconditionError(f"cannot multiply {self.shape} by {other.shape}")
        columns = [other.column(j) for j in range(other.cols)]
        return DenseMatrix(self.rows, other.cols,
                           tuple(_dot(self.row(i), col)
                                 for i in range(self.rows) for col in columns))

    def __sub__(self, other):
        if self.shape != other.shape:
            raise PreconditionError(f"cannot subtract {other.shape} from {self.shape}")
        return DenseMatrix(self.rows, self.cols,
                           tuple(a - b for a, b in zip(self.entries, other.entries)))

    def trace(self):
        return sum((self[i, i] for i in range(min(self.rows, self.cols))), Fraction(0))

    def is_symmetric(self):
        return self.rows == self.cols and self == self.T

    def to_float(self):
        """Float mirror; each entry is the nearest binary64 to the rational."""
        return np.array([float(x) for x in self.entries], dtype=np.float64).reshape(self.rows, self.cols)


def _dot(u, v):
    return sum(map(operator.mul, u, v), Fraction(0))


# --- Fraction-free elimination ---

def _integer_rows(rows):
    """Scale each row by the lcm of its denominators; row scaling keeps rank and solutions."""
    scaled = []
    for row in rows:
        d = math.lcm(*(x.denominator for x in row)) if row else 1
        scaled.append([x.numerator * (d // x.denominator) for x in row])
    return scaled


def _bareiss(m, pivot_cols=None):
    """
    Fraction-free forward elimination on a list of integer rows (in place).

    Pivot rule: first nonzero entry, scanning columns left to right. Only the
    first `pivot_cols` columns are eligible as pivots (the rest ride along as
    right-hand sides).

    Returns (rank, pivot_columns, swaps).
    """
    nrows = len(m)
    if nrows == 0:
        return 0, [], 0
    ncols = len(m[0])
    pivot_cols = ncols if pivot_cols is None else pivot_cols
    prev = 1
    r = 0
    swaps = 0
    pivots = []
    for c in range(pivot_cols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            m[r], m[p] = m[p], m[r]
            swaps += 1
        pivot = m[r][c]
        pivot_row = m[r]
        for i in range(r + 1, nrows):
            row = m[i]
            lead = row[c]
            for j in range(c + 1, ncols):
                # Sylvester's identity makes this division exact
                row[j] = (pivot * row[j] - lead * pivot_row[j]) // prev
            row[c] = 0
        prev = pivot
        pivots.append(c)
        r += 1
    return r, pivots, swaps


def gram(A):
    """AᵀA, exact and symmetric."""
    if A.rows == 0 or A.cols == 0:
        raise PreconditionError("gram of an empty matrix")
    columns = [A.column(j) for j in range(A.cols)]
    if A.is_integral():
        columns = [[x.numerator for x in col] for col in columns]
    entries = [[None] * A.cols for _ in range(A.cols)]
    for i in range(A.cols):
        for j in range(i, A.cols):
            value = Fraction(sum(map(operator.mul, columns[i], columns[j])))
            entries[i][j] = entries[j][i] = value
    return DenseMatrix.from_rows(entries)


def rank_exact(A):
    """
    Exact rank over the rationals.

    Tall matrices go through the Gram matrix: rank(AᵀA) = rank(A) for real
    (hence rational) A, and AᵀA is only cols x cols.
    """
    if A.rows == 0 or A.cols == 0:
        raise PreconditionError("rank of an empty matrix")
    source = gram(A) if A.rows > A.cols else A
    rank, _, _ = _bareiss(_integer_rows(source.to_rows()))
    return rank


def determinant_exact(S):
    if S.rows != S.cols:
        raise PreconditionError(f"determinant of non-square {S.shape} matrix")
    if S.rows == 0:
        return Fraction(1)
    rows = S.to_rows()
    scale = Fraction(1)
    for row in rows:
        scale *= math.lcm(*(x.denominator for x in row))
    m = _integer_rows(rows)
    rank, _, swaps = _bareiss(m)
    if rank < S.rows:
        return Fraction(0)
    det = Fraction(m[-1][-1]) / scale
    return -det if swaps % 2 else det


def solve_exact(S, b):
    """
    Solve S x = b exactly. `b` is a vector or a DenseMatrix of right-hand sides;
    the result has the same kind.
    """
    if S.rows != S.cols:
        raise PreconditionError(f"solve_exact needs a square matrix, got {S.shape}")
    size = S.rows
    if isinstance(b, DenseMatrix):
        if b.rows != size:
            raise PreconditionError(f"right-hand side has {b.rows} rows, expected {size}")
        rhs = b.to_rows()
        width = b.cols
    else:
        rhs = [[as_fraction(x)] for x in b]
        if len(rhs) != size:
            raise PreconditionError(f"right-hand side has length {len(rhs)}, expected {size}")
        width = 1

    augmented = _integer_rows([left + right for left, right in zip(S.to_rows(), rhs)])
    rank, _, _ = _bareiss(augmented, pivot_cols=size)
    if rank < size:
        raise Singular(f"{size} x {size} system has rank {rank}")

    solution = [[Fraction(0)] * width for _ in range(size)]
    for i in reversed(range(size)):
        row = augmented[i]
        for w in range(width):
            acc = Fraction(row[size + w])
            for j in range(i + 1, size):
                if row[j]:
                    acc -= row[j] * solution[j][w]
            solution[i][w] = acc / row[i]

    if isinstance(b, DenseMatrix):
        return DenseMatrix.from_rows(solution)
    return tuple(r[0] for r in solution)


def pseudoinverse(A):
    """A⁺ = (AᵀA)⁻¹Aᵀ for full-column-rank A; rank deficiency is an error, not regularized."""
    rank = rank_exact(A)
    if rank < A.cols:
        raise RankDeficient(rank, A.cols)
    return solve_exact(gram(A), A.T)


@dataclass(frozen=True)
class PenroseCheck:
    identities: tuple

    @property
    def failed(self):
        """1-based indices of the identities that do not hold."""
        return [i + 1 for i, ok in enumerate(self.identities) if not ok]

    @property
    def all_hold(self):
        return all(self.identities)


def penrose_check(A, Aplus):
    """A A⁺ A = A, A⁺ A A⁺ = A⁺, (A A⁺)ᵀ = A A⁺, (A⁺ A)ᵀ = A⁺ A, all checked exactly."""
    if Aplus.shape != (A.cols, A.rows):
        raise PreconditionError(f"pseudoinverse candidate has shape {Aplus.shape}, "
                                f"expected {(A.cols, A.rows)}")
    AAp = A @ Aplus
    ApA = Aplus @ A
    return PenroseCheck((
        AAp @ A == A,
        ApA @ Aplus == Aplus,
        AAp.is_symmetric(),
        ApA.is_symmetric(),
    ))


def projection(A):
    """Orthogonal projector A A⁺ onto the column space of A."""
    return A @ pseudoinverse(A)


def op_norm_inf(P):
    """Max absolute row sum: the operator norm for the sup norm on vectors."""
    if isinstance(P, DenseMatrix):
        if P.rows == 0 or P.cols == 0:
            raise PreconditionError("norm of an empty matrix")
        return max(sum((abs(x) for x in P.row(i)), Fraction(0)) for i in range(P.rows))
    P = np.asarray(P, dtype=np.float64)
    if P.size == 0:
        raise PreconditionError("norm of an empty matrix")
    return float(np.abs(P).sum(axis=1).max())


def op_norm_2(P, tol=1e-12, max_iter=None):
    """
    Largest singular value by power iteration on PᵀP.

    Start vector is all ones; if PᵀP annihilates it, a fixed ramp is used instead.
    """
    if tol <= 0:
        raise PreconditionError("tol must be positive")
    max_iter = settings.power_iter_cap if max_iter is None else max_iter
    P = P.to_float() if isinstance(P, DenseMatrix) else np.asarray(P, dtype=np.float64)
    if P.size == 0:
        raise PreconditionError("norm of an empty matrix")

    G = P.T @ P
    size = G.shape[0]
    x = np.ones(size)
    if not np.any(G @ x):
        x = 1.0 + np.arange(1, size + 1) / (size + 1)
        if not np.any(G @ x):
            if not np.any(G):
                return 0.0
            logger.debug("both start vectors lie in the null space; falling back to the column sums")
            x = np.abs(G).sum(axis=0)

    x = x / np.linalg.norm(x)
    previous = None
    for iteration in range(max_iter):
        y = G @ x
        ny = np.linalg.norm(y)
        if ny == 0.0:
            return 0.0
        estimate = float(x @ y)
        if previous is not None and abs(estimate - previous) <= tol * abs(estimate):
            logger.debug("power iteration converged after %d steps", iteration + 1)
            return math.sqrt(max(estimate, 0.0))
        previous = estimate
        x = y / ny
    raise NonConvergence(f"power iteration did not reach relative tol {tol} in {max_iter} steps")


def projection_inf_norm(A):
    """
    Exact ‖A A⁺‖_∞ without materializing the rational projector.

    P does not change when columns are rescaled, so each column is scaled to
    integers; then P = A adj(G) Aᵀ / det(G) with G the integer Gram matrix.
    """
    columns = []
    for j in range(A.cols):
        col = A.column(j)
        d = math.lcm(*(x.denominator for x in col))
        columns.append([x.numerator * (d // x.denominator) for x in col])
    A_int = DenseMatrix.from_columns(columns)
    G = gram(A_int)
    det = determinant_exact(G)
    if det == 0:
        raise RankDeficient(rank_exact(A_int), A.cols)
    adj = solve_exact(G, DenseMatrix.identity(G.rows))
    adj_int = [[int(x * det) for x in adj.row(i)] for i in range(adj.rows)]

    rows = [[x.numerator for x in A_int.row(i)] for i in range(A_int.rows)]
    weighted = [[sum(map(operator.mul, r, col)) for col in zip(*adj_int)] for r in rows]
    best = 0
    for w in weighted:
        total = sum(abs(sum(map(operator.mul, w, r))) for r in rows)
        best = max(best, total)
    return Fraction(best) / abs(det)
