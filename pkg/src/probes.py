"""
One verifier per claim about the residue matrices.

Probes never raise on a falsified claim: they return a ProbeReport with a
Fails verdict and the inputs needed to reproduce the counterexample. Claims
about limits are only ever Measured on finite truncations.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from .config import settings
from .errors import PreconditionError
from .hilbert import default_space
from .interval import Interval
from .linalg import DenseMatrix, op_norm_2, projection_inf_norm, rank_exact
from .reports import format_decimal
from .sequences import (Convention, ResidueSpec, build_matrix, classify_rows, constant_vector,
                        lcm_upto, row_count_default)
from .solvers import chebyshev_fit, distance, lsq_unweighted, projected_target, residual

logger = logging.getLogger(__name__)


class Verdict(Enum):
    HOLDS = "Holds"
    FAILS = "Fails"
    MEASURED = "Measured"


@dataclass(frozen=True)
class ProbeReport:
    claim: str
    params: dict
    verdict: Verdict
    evidence: dict

    @property
    def failed(self):
        return self.verdict is Verdict.FAILS

    def to_dict(self):
        return {
            "claim": self.claim,
            "params": _jsonable(self.params),
            "verdict": self.verdict.value,
            "evidence": _jsonable(self.evidence),
        }


@dataclass(frozen=True)
class DecompositionReport:
    n: int
    L: int
    eps_star: Fraction
    minimax_term: Interval
    projection_term: Interval
    gap_term: Interval
    tail: Interval
    total_bound: Interval
    d_sq: Interval

    @property
    def dominates(self):
        return self.total_bound.hi >= self.d_sq.lo - (self.total_bound.width + self.d_sq.width)

    def to_dict(self):
        return {
            "n": self.n,
            "L": self.L,
            "eps_star": str(self.eps_star),
            "minimax_term": self.minimax_term.to_dict(),
            "projection_term": self.projection_term.to_dict(),
            "gap_term": self.gap_term.to_dict(),
            "tail": self.tail.to_dict(),
            "total_bound": self.total_bound.to_dict(),
            "d_sq": self.d_sq.to_dict(),
            "dominates": self.dominates,
        }


@dataclass(frozen=True)
class ScanRow:
    n: int
    M: int
    eps_star: Fraction
    d_sq: Interval
    tail: Interval
    pn_inf_norm: Fraction
    pn_2_norm: float


def _jsonable(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, Interval):
        return value.to_dict()
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.generic):
        return value.item()
    return value


def _natural_matrix(n, convention=Convention.RESIDUE):
    return build_matrix(ResidueSpec(n, row_count_default(n), convention))


def _n_values(n_range):
    values = list(n_range)
    if not values or min(values) < 2:
        raise PreconditionError(f"n range must be nonempty with n >= 2, got {values}")
    return values


# --- Rank ---

def verify_rank_claim(n_max, n_min=2):
    """rank A(n, L_n - 1) = n - 1 for every n in n_min..n_max."""
    rows = []
    failure = None
    for n in _n_values(range(n_min, n_max + 1)):
        A = _natural_matrix(n)
        rank = rank_exact(A)
        rows.append({"n": n, "rows": A.rows, "rank": rank, "expected": n - 1,
                     "verdict": (Verdict.HOLDS if rank == n - 1 else Verdict.FAILS).value})
        if rank != n - 1 and failure is None:
            failure = {"n": n, "M": A.rows, "rank": rank}
            logger.warning("rank claim fails at n=%d: rank %d", n, rank)
    evidence = {"ranks": rows}
    if failure:
        evidence["counterexample"] = failure
    return ProbeReport("rank-full-column", {"n_min": n_min, "n_max": n_max},
                       Verdict.FAILS if failure else Verdict.HOLDS, evidence)


def triangular_minor_probe(n):
    """
    i·row₁ - row_i = (k⌊i/k⌋)_k for i = 2..n is lower triangular with diagonal k,
    which certifies n - 1 independent rows.
    """
    if n < 2:
        raise PreconditionError(f"n must be at least 2, got {n}")
    params = {"n": n}
    if n == 2:
        return ProbeReport("rank-triangular-minor", params, Verdict.HOLDS,
                           {"minor": [["1"]], "note": "row 1 is (1); a single nonzero column"})

    A = build_matrix(ResidueSpec(n, n, Convention.RESIDUE))
    first = A.row(0)
    minor = DenseMatrix.from_rows([[i * x - y for x, y in zip(first, A.row(i - 1))]
                                   for i in range(2, n + 1)])
    size = n - 1
    expected = DenseMatrix.from_rows([[k * (i // k) for k in range(2, n + 1)] for i in range(2, n + 1)])
    upper_clear = all(minor[r, c] == 0 for r in range(size) for c in range(r + 1, size))
    diagonal = [minor[r, r] for r in range(size)]
    holds = minor == expected and upper_clear and all(d != 0 for d in diagonal)
    evidence = {"minor": [[str(x) for x in minor.row(r)] for r in range(size)],
                "diagonal": diagonal, "lower_triangular": upper_clear}
    if not holds:
        evidence["counterexample"] = {"n": n}
    return ProbeReport("rank-triangular-minor", params,
                       Verdict.HOLDS if holds else Verdict.FAILS, evidence)


# --- Monotone map ---

class PairOutcome(Enum):
    HOLDS = "holds"
    FAILS = "fails"
    VACUOUS = "vacuous"
    PRECONDITION = "precondition"


def check_monotone_pair(A, x, y):
    """Classify one (A, x, y) instance of: A >= 0, no zero column, x >= y, x != y ⇒ Ax >= Ay, Ax != Ay."""
    x = [Fraction(v) for v in x]
    y = [Fraction(v) for v in y]
    if any(e < 0 for e in A.entries) or any(all(e == 0 for e in A.column(j)) for j in range(A.cols)):
        return PairOutcome.PRECONDITION
    if any(a < b for a, b in zip(x, y)):
        return PairOutcome.PRECONDITION
    if x == y:
        return PairOutcome.VACUOUS
    Ax, Ay = A.matvec(x), A.matvec(y)
    if all(a >= b for a, b in zip(Ax, Ay)) and Ax != Ay:
        return PairOutcome.HOLDS
    return PairOutcome.FAILS


def _random_instance(rng, max_rows, max_cols):
    rows = int(rng.integers(2, max_rows + 1))
    cols = int(rng.integers(1, min(rows - 1, max_cols) + 1))
    entries = rng.integers(0, 6, size=(rows, cols)) * (rng.random((rows, cols)) < 0.6)
    for j in range(cols):
        if not entries[:, j].any():
            entries[int(rng.integers(0, rows)), j] = int(rng.integers(1, 6))
    A = DenseMatrix.from_rows(entries.tolist())
    y = rng.integers(-5, 6, size=cols)
    step = rng.integers(0, 4, size=cols) * (rng.random(cols) < 0.5)
    return A, (y + step).tolist(), y.tolist()


def monotone_map_property(trials=1000, dims=(8, 5), seed=None, n_max_natural=6):
    """Seeded random instances plus the natural residue matrices for n <= n_max_natural."""
    if trials < 1:
        raise PreconditionError("trials must be at least 1")
    seed = settings.seed if seed is None else seed
    rng = np.random.default_rng(seed)
    counts = {outcome.value: 0 for outcome in PairOutcome}
    counterexample = None

    def record(A, x, y, source):
        nonlocal counterexample
        outcome = check_monotone_pair(A, x, y)
        counts[outcome.value] += 1
        if outcome is PairOutcome.FAILS and counterexample is None:
            counterexample = {"source": source, "A": [[str(e) for e in A.row(i)] for i in range(A.rows)],
                              "x": [str(v) for v in x], "y": [str(v) for v in y]}

    for t in range(trials):
        A, x, y = _random_instance(rng, *dims)
        record(A, x, y, f"random trial {t}")

    for n in range(2, n_max_natural + 1):
        A = _natural_matrix(n)
        for k in range(A.cols):
            y = [0] * A.cols
            x = [int(j == k) for j in range(A.cols)]
            record(A, x, y, f"natural n={n}, unit step {k}")
        for t in range(10):
            y = rng.integers(-3, 4, size=A.cols)
            x = y + rng.integers(0, 3, size=A.cols)
            record(A, x.tolist(), y.tolist(), f"natural n={n}, pair {t}")

    evidence = {"outcomes": counts}
    if counterexample:
        evidence["counterexample"] = counterexample
    return ProbeReport("monotone-map", {"trials": trials, "dims": list(dims), "seed": seed,
                                        "n_max_natural": n_max_natural},
                       Verdict.FAILS if counterexample else Verdict.HOLDS, evidence)


# --- Positive image ---

def positive_image_check(n, M, v):
    """Av > 0 on rows with a positive entry and Av = 0 exactly on the rows divisible by L_n."""
    v = [Fraction(x) for x in v]
    if len(v) != n - 1:
        raise PreconditionError(f"v needs {n - 1} entries, got {len(v)}")
    if any(x <= 0 for x in v):
        raise PreconditionError("v must be strictly positive")
    A = build_matrix(ResidueSpec(n, M, Convention.RESIDUE))
    image = A.matvec(v)
    zero_rows = classify_rows(n, M).zero_rows
    bad = None
    for i, value in enumerate(image, start=1):
        has_positive = any(e > 0 for e in A.row(i - 1))
        ok = value > 0 if has_positive else value == 0
        ok = ok and ((i in zero_rows) == (not has_positive))
        if not ok:
            bad = {"row": i, "value": value, "has_positive_entry": has_positive}
            break
    evidence = {"image": [str(x) for x in image], "zero_rows": list(zero_rows)}
    if bad:
        evidence["counterexample"] = {"n": n, "M": M, "v": [str(x) for x in v], **bad}
    return ProbeReport("positive-image", {"n": n, "M": M, "v": [str(x) for x in v]},
                       Verdict.FAILS if bad else Verdict.HOLDS, evidence)


# --- Projection norms ---

def _float_projection(A):
    Af = A.to_float()
    return Af @ np.linalg.solve(Af.T @ Af, Af.T)


def pn_norm_scan(n_range, tol=1e-12):
    """Exact ‖P_n‖_∞ and float ‖P_n‖₂ for P_n = A A⁺ on rows 1..L_n - 1."""
    rows = []
    for n in _n_values(n_range):
        A = _natural_matrix(n)
        inf_norm = projection_inf_norm(A)
        two_norm = op_norm_2(_float_projection(A), tol=tol)
        rows.append({"n": n, "M": A.rows, "pn_inf_norm": inf_norm,
                     "pn_inf_decimal": format_decimal(inf_norm), "pn_2_norm": two_norm,
                     "inf_norm_at_most_one": inf_norm <= 1,
                     "two_norm_is_one": abs(two_norm - 1.0) <= 1e-8})
        logger.info("n=%d: ‖P‖_inf = %s, ‖P‖_2 = %.12g", n, inf_norm, two_norm)
    return ProbeReport("projection-norm", {"n": [r["n"] for r in rows]}, Verdict.MEASURED,
                       {"norms": rows})


def strong_convergence_probe(x, n_range):
    """
    ‖P_n x̂ - x̂‖_∞ with x̂ = (x(1), ..., x(M)) cut to the rows of P_n.

    x maps a 1-based index to an exact value.
    """
    rows = []
    for n in _n_values(n_range):
        A = _natural_matrix(n)
        x_hat = [Fraction(x(i)) for i in range(1, A.rows + 1)]
        a = lsq_unweighted(A, x_hat).coefficients.values
        deviation = max(abs(r) for r in residual(A, x_hat, a))
        rows.append({"n": n, "M": A.rows, "deviation": deviation, "deviation_decimal": float(deviation)})
    return ProbeReport("strong-convergence", {"n": [r["n"] for r in rows]}, Verdict.MEASURED,
                       {"deviations": rows})


# --- Error decomposition of the distance ---

def _weighted_sum(values, sums):
    total = Interval(0.0, 0.0)
    for value, s in zip(values, sums):
        if value:
            total = total + s * Interval.point(Fraction(value) ** 2)
    return total


def distance_decomposition(n, tol=None, space=None):
    """
    Split the distance bound into the minimax, projection and tail pieces.

    With a the minimax optimum against c and P = A A⁺:
        total = Σ_J s_j (|Aa - Pc|_j + |Pc - c|_j)² + s(L, L)
    which dominates the true distance d_sq.
    """
    space = default_space() if space is None else space
    L = lcm_upto(n)
    M = L - 1
    A = build_matrix(ResidueSpec(n, M, Convention.RESIDUE))
    c = constant_vector(M)
    sums = space.class_sums(L, tol)

    fit = chebyshev_fit(A, c)
    minimax_residual = residual(A, c, fit.coefficients.values)
    Pc = projected_target(A, c)
    projection_residual = [p - 1 for p in Pc]
    gap = [x - p for x, p in zip(A.matvec(fit.coefficients.values), Pc)]
    tail = sums[-1]

    j_rows = classify_rows(n, M).j_rows
    j_sums = [sums[j - 1] for j in j_rows]
    pick = lambda values: [values[j - 1] for j in j_rows]

    combined = [abs(g) + abs(q) for g, q in zip(pick(gap), pick(projection_residual))]
    return DecompositionReport(
        n=n,
        L=L,
        eps_star=fit.eps_star,
        minimax_term=_weighted_sum(pick(minimax_residual), j_sums),
        projection_term=_weighted_sum(pick(projection_residual), j_sums),
        gap_term=_weighted_sum(pick(gap), j_sums),
        tail=tail,
        total_bound=_weighted_sum(combined, j_sums) + tail,
        d_sq=distance(n, tol, space=space).d_sq,
    )


def decomposition_probe(n, tol=None):
    report = distance_decomposition(n, tol)
    evidence = report.to_dict()
    if not report.dominates:
        evidence["counterexample"] = {"n": n, "tol": tol}
    return ProbeReport("distance-decomposition", {"n": n, "tol": tol},
                       Verdict.MEASURED if report.dominates else Verdict.FAILS, evidence)


# --- Minimax target gap ---

def minimax_gap_probe(n, M=None):
    """The minimal ε against c next to the one against A A⁺ c (zero by construction)."""
    M = row_count_default(n) if M is None else M
    A = build_matrix(ResidueSpec(n, M, Convention.RESIDUE))
    c = constant_vector(M)
    against_c = chebyshev_fit(A, c)
    against_projection = chebyshev_fit(A, c, target="projected")
    return ProbeReport("minimax-gap", {"n": n, "M": M}, Verdict.MEASURED, {
        "eps_star_c": against_c.eps_star,
        "eps_star_projected": against_projection.eps_star,
        "lsq_sup_residual": lsq_unweighted(A, c).sup_residual,
    })


# --- Distance scan ---

def _scan_one(n, tol, space):
    A = _natural_matrix(n)
    L = A.rows + 1
    fit = chebyshev_fit(A, constant_vector(A.rows))
    d = distance(n, tol, space=space)
    return ScanRow(
        n=n,
        M=A.rows,
        eps_star=fit.eps_star,
        d_sq=d.d_sq,
        tail=space.tail_term(L, tol),
        pn_inf_norm=projection_inf_norm(A),
        pn_2_norm=op_norm_2(_float_projection(A), tol=1e-12),
    )


def dn_scan(n_range, tol=None, workers=None, space=None):
    """One ScanRow per n, in increasing n whatever the worker count."""
    space = default_space() if space is None else space
    workers = settings.workers if workers is None else workers
    values = sorted(_n_values(n_range))
    logger.info("scanning n=%s with %d worker(s)", values, workers)
    if workers == 1:
        return [_scan_one(n, tol, space) for n in values]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda n: _scan_one(n, tol, space), values))


def scan_report(rows):
    """Measured, unless d_sq grows with n or drops below the tail beyond the interval widths."""
    problems = []
    for prev, row in zip(rows, rows[1:]):
        if row.d_sq.lo > prev.d_sq.hi:
            problems.append({"n": row.n, "issue": "d_sq increased", "previous_n": prev.n})
    for row in rows:
        if row.d_sq.hi < row.tail.lo:
            problems.append({"n": row.n, "issue": "d_sq below tail"})
    evidence = {"rows": [{"n": r.n, "M": r.M, "eps_star": r.eps_star, "d_sq": r.d_sq,
                          "tail": r.tail, "pn_inf_norm": r.pn_inf_norm, "pn_2_norm": r.pn_2_norm}
                         for r in rows]}
    if problems:
        evidence["counterexample"] = problems[0]
    return ProbeReport("distance-scan", {"n": [r.n for r in rows]},
                       Verdict.FAILS if problems else Verdict.MEASURED, evidence)
