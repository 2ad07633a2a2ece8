"""
The three fits: unweighted least squares (A A⁺ c), the weighted least
squares giving the distance in H, and the Chebyshev (minimax) fit that
decides feasibility of the inequality system |Σ a_k R_k(i) - 1| <= ε.
"""

import logging
import sys
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import linprog

from .config import settings
from .errors import (IllConditionedWarning, IterationCap, LabError, PreconditionError,
                     RankDeficient)
from .hilbert import default_space
from .interval import Interval
from .linalg import DenseMatrix, _bareiss, _integer_rows, gram, rank_exact, solve_exact
from .sequences import (CoefficientVector, Convention, ResidueSpec, build_matrix,
                        constant_vector, lcm_upto)

logger = logging.getLogger(__name__)

EPS = sys.float_info.epsilon


@dataclass(frozen=True)
class LeastSquaresResult:
    coefficients: CoefficientVector
    residual: tuple

    @property
    def sup_residual(self):
        return max(abs(r) for r in self.residual)


@dataclass(frozen=True)
class MinimaxResult:
    coefficients: CoefficientVector
    eps_star: Fraction
    active_rows: tuple
    iterations: int
    method: str
    eps_float: float = None

    def to_dict(self):
        return {
            "eps_star": str(self.eps_star),
            "coefficients": self.coefficients.as_strings(),
            "active_rows": list(self.active_rows),
            "iterations": self.iterations,
            "method": self.method,
        }


@dataclass(frozen=True)
class DistanceResult:
    n: int
    coefficients: CoefficientVector
    d_sq: Interval
    terms: tuple
    condition: float
    ill_conditioned: bool = False

    def to_dict(self):
        return {
            "n": self.n,
            "coefficients": self.coefficients.as_strings(),
            "d_sq": {"mid": self.d_sq.mid, "width": self.d_sq.width},
            "condition": self.condition,
        }


@dataclass(frozen=True)
class OptimalityCheck:
    passed: bool
    trials: int
    counterexample: tuple = None

    def __bool__(self):
        return self.passed


def _as_exact_vector(c):
    return tuple(Fraction(x) for x in c)


def residual(A, c, a):
    """A a - c, exact."""
    c = _as_exact_vector(c)
    if len(c) != A.rows:
        raise PreconditionError(f"target has length {len(c)}, matrix has {A.rows} rows")
    return tuple(x - y for x, y in zip(A.matvec(a), c))


def residual_sup(A, c, a):
    return max(abs(r) for r in residual(A, c, a))


# --- Unweighted least squares ---

def lsq_unweighted(A, c, convention=Convention.RESIDUE):
    """a = A⁺c through the exact normal equations, plus the exact residual A a - c."""
    c = _as_exact_vector(c)
    rank = rank_exact(A)
    if rank < A.cols:
        raise RankDeficient(rank, A.cols)
    rhs = A.T.matvec(c)
    a = solve_exact(gram(A), rhs)
    return LeastSquaresResult(CoefficientVector(a, convention), residual(A, c, a))


def lsq_unweighted_float(A, c):
    Af = A.to_float()
    cf = np.array([float(x) for x in c], dtype=np.float64)
    coefficients, *_ = np.linalg.lstsq(Af, cf, rcond=None)
    return coefficients


def projected_target(A, c):
    """A A⁺ c, computed as A times the least squares coefficients."""
    a = lsq_unweighted(A, c).coefficients.values
    return A.matvec(a)


# --- Exact simplex ---

class _Tableau:
    """
    Dense two-phase tableau for  min fᵀz  s.t.  E z = g, z >= 0, g >= 0.

    Artificial columns start as the identity, so at every step they hold the
    accumulated row operations; that block gives the simplex multipliers.
    Bland's rule (lowest index enters, lowest basic index leaves on ties)
    rules out cycling.
    """

    def __init__(self, E, g, iter_cap):
        self.m = len(E)
        self.nvars = len(E[0]) if E else 0
        self.iter_cap = iter_cap
        self.iterations = 0
        width = self.nvars + self.m
        self.rows = []
        for i, (row, rhs) in enumerate(zip(E, g)):
            artificial = [Fraction(0)] * self.m
            artificial[i] = Fraction(1)
            self.rows.append([Fraction(x) for x in row] + artificial + [Fraction(rhs)])
        self.basis = [self.nvars + i for i in range(self.m)]
        self.rhs = width

    def _reduced_costs(self, costs, allowed):
        reduced = {}
        for j in allowed:
            total = costs[j]
            for i, b in enumerate(self.basis):
                entry = self.rows[i][j]
                if entry and costs[b]:
                    total -= costs[b] * entry
            reduced[j] = total
        return reduced

    def _pivot(self, r, j):
        pivot_row = self.rows[r]
        pivot = pivot_row[j]
        self.rows[r] = pivot_row = [x / pivot for x in pivot_row]
        for i, row in enumerate(self.rows):
            if i == r:
                continue
            factor = row[j]
            if factor:
                self.rows[i] = [x - factor * y for x, y in zip(row, pivot_row)]
        self.basis[r] = j
        self.iterations += 1
        if self.iterations > self.iter_cap:
            raise IterationCap(f"simplex exceeded {self.iter_cap} pivots")

    def optimize(self, costs, allowed):
        allowed = sorted(allowed)
        while True:
            reduced = self._reduced_costs(costs, allowed)
            entering = next((j for j in allowed if reduced[j] < 0), None)
            if entering is None:
                return
            best = None
            for i, row in enumerate(self.rows):
                entry = row[entering]
                if entry > 0:
                    ratio = row[self.rhs] / entry
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                raise LabError("linear program is unbounded")
            self._pivot(best[1], entering)

    def drive_out_artificials(self):
        """Pivot artificials out of the basis; drop rows that turn out redundant."""
        keep = []
        for i in range(len(self.rows)):
            if self.basis[i] < self.nvars:
                keep.append(i)
                continue
            j = next((j for j in range(self.nvars) if self.rows[i][j] != 0), None)
            if j is None:
                logger.debug("dropping redundant equality row %d", i)
                continue
            self._pivot(i, j)
            keep.append(i)
        self.rows = [self.rows[i] for i in keep]
        self.basis = [self.basis[i] for i in keep]

    def objective(self, costs):
        return sum((costs[b] * row[self.rhs] for b, row in zip(self.basis, self.rows)), Fraction(0))

    def multipliers(self, costs):
        """y with Eᵀy <= f at optimality and gᵀy = optimal value."""
        y = [Fraction(0)] * self.m
        for b, row in zip(self.basis, self.rows):
            if costs[b]:
                for k in range(self.m):
                    if row[self.nvars + k]:
                        y[k] += costs[b] * row[self.nvars + k]
        return y


def _minimax_exact(A, c, iter_cap):
    """
    Solve the dual of  min t  s.t. |A a - c| <= t  exactly:

        max  cᵀ(v - u)   s.t.  Aᵀ(v - u) = 0,  1ᵀ(u + v) = 1,  u, v >= 0,

    and read a and t back off the simplex multipliers (a = -y[:cols], t = -y[cols]).
    """
    M, cols = A.rows, A.cols
    E = []
    for k in range(cols):
        column = A.column(k)
        E.append(list(column) + [-x for x in column])
    E.append([Fraction(1)] * (2 * M))
    g = [Fraction(0)] * cols + [Fraction(1)]

    tableau = _Tableau(E, g, iter_cap)
    phase_one = [Fraction(0)] * tableau.nvars + [Fraction(1)] * tableau.m
    tableau.optimize(phase_one, range(tableau.nvars + tableau.m))
    if tableau.objective(phase_one) != 0:
        raise LabError("minimax dual is infeasible")
    tableau.drive_out_artificials()
    logger.debug("phase one done after %d pivots", tableau.iterations)

    costs = [-x for x in c] + list(c) + [Fraction(0)] * tableau.m
    tableau.optimize(costs, range(tableau.nvars))
    y = tableau.multipliers(costs)
    a = tuple(-x for x in y[:cols])
    eps = -y[cols]
    return a, eps, tableau.iterations


def _minimax_float(A, c):
    """HiGHS on the primal LP; returns float (a, t) or None when it fails."""
    Af = A.to_float()
    cf = np.array([float(x) for x in c], dtype=np.float64)
    M, cols = Af.shape
    ones = np.ones((M, 1))
    A_ub = np.vstack([np.hstack([Af, -ones]), np.hstack([-Af, -ones])])
    b_ub = np.concatenate([cf, -cf])
    objective = np.zeros(cols + 1)
    objective[-1] = 1.0
    bounds = [(None, None)] * cols + [(0, None)]
    result = linprog(objective, A_ub=A_ub, b_ub=b_ub, bounds=bounds, method="highs")
    if result.status != 0:
        logger.warning("HiGHS failed: %s", result.message)
        return None
    return result.x[:cols], float(result.x[-1]), int(result.nit)


def _certify(A, c, a_float, t_float):
    """
    Re-solve the float optimum's active set exactly and certify it.

    Picks rows with |r_i| ≈ t in order of closeness, keeps those that raise
    the rank of the active system s_i(A_i a - c_i) = t, solves it exactly, then
    checks primal feasibility and an exact dual certificate λ >= 0 with
    Σ λ_i s_i A_i = 0, Σ λ_i = 1 (which proves no a does better).
    """
    cols = A.cols
    r_float = A.to_float() @ a_float - np.array([float(x) for x in c])
    slack = t_float - np.abs(r_float)
    window = 1e-6 * max(1.0, t_float)
    candidates = sorted((i for i in range(A.rows) if slack[i] <= window), key=lambda i: (slack[i], i))

    chosen = []
    system = []
    for i in candidates:
        sign = 1 if r_float[i] >= 0 else -1
        row = [sign * x for x in A.row(i)] + [Fraction(-1)]
        trial = system + [row]
        rank, _, _ = _bareiss(_integer_rows(trial))
        if rank == len(trial):
            system, chosen = trial, chosen + [(i, sign)]
        if len(system) == cols + 1:
            break
    if len(system) < cols + 1:
        return None

    square = DenseMatrix.from_rows(system)
    rhs = [sign * c[i] for i, sign in chosen]
    solution = solve_exact(square, rhs)
    a, t = solution[:cols], solution[cols]
    if residual_sup(A, c, a) != t:
        return None

    lam = solve_exact(square.T, [Fraction(0)] * cols + [Fraction(-1)])
    # the last column of the system is -1, so that equation reads -Σλ = -1
    if any(x < 0 for x in lam):
        return None
    return a, t


def chebyshev_fit(A, c, convention=Convention.RESIDUE, method="auto", exact_threshold=None,
                  iter_cap=None, target="c"):
    """
    Minimal t with |A a - c|_i <= t for every row, and an optimal basic a.

    target="projected" fits A A⁺ c instead of c, which is always consistent.

    method: "exact" (rational simplex), "float" (HiGHS plus exact certificate,
    falling back to the exact simplex), or "auto" (exact up to exact_threshold rows).
    """
    if A.rows == 0 or A.cols == 0:
        raise PreconditionError("chebyshev_fit needs a nonempty matrix")
    c = _as_exact_vector(c)
    if len(c) != A.rows:
        raise PreconditionError(f"target has length {len(c)}, matrix has {A.rows} rows")
    exact_threshold = settings.exact_threshold if exact_threshold is None else exact_threshold
    iter_cap = settings.simplex_iter_cap if iter_cap is None else iter_cap
    if method not in ("auto", "exact", "float"):
        raise PreconditionError(f"unknown method {method!r}")
    if target not in ("c", "projected"):
        raise PreconditionError(f"unknown target {target!r}")
    if target == "projected":
        c = projected_target(A, c)
    use_exact = method == "exact" or (method == "auto" and A.rows <= exact_threshold)

    eps_float = None
    certified = None
    iterations = 0
    if not use_exact:
        found = _minimax_float(A, c)
        if found is not None:
            a_float, eps_float, iterations = found
            certified = _certify(A, c, a_float, eps_float)
        if certified is None:
            logger.info("float minimax could not be certified on %d rows; running the exact simplex",
                        A.rows)

    if certified is not None:
        a, eps = certified
        used = "float-certified"
    else:
        a, eps, iterations = _minimax_exact(A, c, iter_cap)
        used = "exact-simplex"

    r = residual(A, c, a)
    if max(abs(x) for x in r) != eps:
        raise LabError(f"minimax verification failed: max residual {max(abs(x) for x in r)} != {eps}")
    active = tuple(i + 1 for i, x in enumerate(r) if abs(x) == eps)
    return MinimaxResult(CoefficientVector(a, convention), eps, active, iterations, used, eps_float)


def feasibility(eps, n, M, convention=Convention.RESIDUE):
    """Whether the inequality system with tolerance eps has a solution on rows 1..M."""
    eps = Fraction(eps)
    if eps < 0:
        raise PreconditionError("eps must be nonnegative")
    A = build_matrix(ResidueSpec(n, M, convention))
    return eps >= chebyshev_fit(A, constant_vector(M), convention).eps_star


# --- Weighted least squares (the distance in H) ---

def weighted_lsq(A, class_weights, forced_tail, convention=Convention.FRACTIONAL, cond_threshold=None):
    """
    Minimize Σ_j s_j (A a - 1)_j² + s_tail over a.

    Solves the weighted normal equations at the weight midpoints in float;
    d_sq carries the weight widths and a conditioning allowance.
    """
    if len(class_weights) != A.rows:
        raise PreconditionError(f"{len(class_weights)} class weights for {A.rows} rows")
    rank = rank_exact(A)
    if rank < A.cols:
        raise RankDeficient(rank, A.cols)
    cond_threshold = settings.cond_threshold if cond_threshold is None else cond_threshold

    Af = A.to_float()
    w = np.array([s.mid for s in class_weights])
    ones = np.ones(A.rows)
    normal = Af.T @ (w[:, None] * Af)
    rhs = Af.T @ (w * ones)
    condition = float(np.linalg.cond(normal))
    a = np.linalg.solve(normal, rhs)
    r = Af @ a - ones

    terms = tuple(s * Interval.point(float(x)).square() for s, x in zip(class_weights, r))
    d_sq = sum(terms, Interval(0.0, 0.0)) + forced_tail

    ill = not condition < cond_threshold
    slack = condition * EPS * d_sq.hi
    if ill:
        message = f"weighted normal equations have condition {condition:.3g}; d_sq widened"
        logger.warning(message)
        warnings.warn(message, IllConditionedWarning, stacklevel=2)
    # the true minimum sits below the value at the float solution
    d_sq = Interval(max(0.0, d_sq.lo - slack), d_sq.hi)
    return DistanceResult(
        n=A.cols + 1,
        coefficients=CoefficientVector([float(x) for x in a], convention),
        d_sq=d_sq,
        terms=terms + (forced_tail,),
        condition=condition,
        ill_conditioned=ill,
    )


def distance(n, tol=None, convention=Convention.FRACTIONAL, space=None):
    """d_n² = min_a ‖Σ a_k γ_k - γ‖²_H using the rows 1..L_n - 1 and the forced tail class."""
    space = default_space() if space is None else space
    L = lcm_upto(n)
    if L == 1:
        raise PreconditionError("distance needs n >= 2")
    A = build_matrix(ResidueSpec(n, L - 1, convention))
    sums = space.class_sums(L, tol)
    return weighted_lsq(A, sums[:-1], sums[-1], convention)


# --- Independent optimality check ---

def _random_step(rng, size):
    numerators = rng.integers(-1000, 1001, size=size)
    scales = rng.integers(0, 4, size=size)
    return [Fraction(int(p), 1000 * 10 ** int(s)) for p, s in zip(numerators, scales)]


def optimality_probe(A, c, a_star, trials=100, seed=None, class_weights=None):
    """
    Check that seeded perturbations of a_star never lower the objective.

    Unweighted (class_weights is None): exact ‖A a - c‖². Weighted: the float
    objective at weight midpoints, allowing for the weight widths.
    """
    seed = settings.seed if seed is None else seed
    rng = np.random.default_rng(seed)
    values = a_star.values if isinstance(a_star, CoefficientVector) else tuple(a_star)

    if class_weights is None:
        base_values = tuple(Fraction(x) for x in values)
        base = sum(x * x for x in residual(A, c, base_values))
        for _ in range(trials):
            step = _random_step(rng, A.cols)
            candidate = tuple(x + d for x, d in zip(base_values, step))
            if sum(x * x for x in residual(A, c, candidate)) < base:
                return OptimalityCheck(False, trials, candidate)
        return OptimalityCheck(True, trials)

    Af = A.to_float()
    cf = np.array([float(x) for x in c])
    w = np.array([s.mid for s in class_weights])
    widths = np.array([s.width for s in class_weights])
    a0 = np.array([float(x) for x in values])

    def objective(a):
        r2 = (Af @ a - cf) ** 2
        return float(w @ r2), float(widths @ r2)

    base, base_width = objective(a0)
    for _ in range(trials):
        candidate = a0 + np.array([float(d) for d in _random_step(rng, A.cols)])
        value, width = objective(candidate)
        if value < base - (base_width + width) - 1e-12 * max(1.0, base):
            return OptimalityCheck(False, trials, tuple(float(x) for x in candidate))
    return OptimalityCheck(True, trials)
