"""
Command-line front end for the residue-matrix lab.

Every subcommand writes one output file (default NBBD_OUTPUT_DIR/<subcommand>.<ext>)
and returns an exit status: 0 on success, 1 when a claim probe reports Fails,
2 on input or size errors.
"""

import argparse
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

from .config import settings
from .errors import LabError, MatrixSizeError, PreconditionError
from .hilbert import default_space
from .linalg import op_norm_2, op_norm_inf, penrose_check, projection, pseudoinverse
from .probes import (Verdict, decomposition_probe, distance_decomposition, dn_scan, minimax_gap_probe,
                     monotone_map_property, pn_norm_scan, positive_image_check, scan_report,
                     strong_convergence_probe, triangular_minor_probe, verify_rank_claim)
from .reports import (emit_plot_data, format_decimal, matrix_payload, read_scan_csv, records_table,
                      scan_table, write_csv, write_json, write_matrix)
from .sequences import Convention, ResidueSpec, build_matrix, constant_vector, lcm_upto, row_count_default
from .solvers import chebyshev_fit, distance, lsq_unweighted, lsq_unweighted_float, optimality_probe

logger = logging.getLogger(__name__)

SUBCOMMANDS = ("matrix", "rank", "pinv", "project", "norms", "minimax", "lsq", "distance",
               "decompose", "scan", "probe", "plot")

CLAIMS = ("rank-full-column", "rank-triangular-minor", "monotone-map", "positive-image",
          "projection-norm", "strong-convergence", "distance-decomposition", "distance-scan",
          "minimax-gap")

# Extension written when --format is not given, and the formats each subcommand accepts
DEFAULT_FORMAT = {
    "matrix": "text", "pinv": "text", "project": "text",
    "rank": "csv", "norms": "csv", "scan": "csv",
    "minimax": "json", "lsq": "json", "distance": "json", "decompose": "json", "probe": "json",
    "plot": "dat",
}
FORMATS = {
    "matrix": {"text", "json"}, "pinv": {"text", "json"}, "project": {"text", "json"},
    "rank": {"csv", "json"}, "norms": {"csv", "json"}, "scan": {"csv", "json"},
    "minimax": {"json"}, "lsq": {"json"}, "distance": {"json"}, "decompose": {"json"},
    "probe": {"json"}, "plot": {"dat"},
}
EXTENSIONS = {"text": "txt", "csv": "csv", "json": "json", "dat": "dat"}

# Convention used when --convention is omitted
DEFAULT_CONVENTION = {"distance": Convention.FRACTIONAL}

DEFAULT_N_MAX = 6


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    n: int = None
    n_min: int = 2
    n_max: int = None
    M: int = None
    convention: Convention = None
    tol: float = None
    seed: int = None
    exact_threshold: int = None
    target: str = "c"
    out: Path = None
    format: str = None
    workers: int = None
    trials: int = None
    claim: str = "all"
    plot_data: Path = None
    input: Path = None
    verbose: bool = False

    @classmethod
    def from_args(cls, args):
        return cls(
            subcommand=args.subcommand,
            n=args.n,
            n_min=args.n_min,
            n_max=args.n_max,
            M=args.m,
            convention=Convention(args.convention) if args.convention else None,
            tol=args.tol,
            seed=args.seed,
            exact_threshold=args.exact_threshold,
            target=args.target,
            out=Path(args.out) if args.out else None,
            format=args.format,
            workers=args.workers,
            trials=args.trials,
            claim=args.claim,
            plot_data=Path(args.plot_data) if args.plot_data else None,
            input=Path(args.input) if args.input else None,
            verbose=args.verbose,
        )

    @property
    def resolved_convention(self):
        if self.convention is not None:
            return self.convention
        return DEFAULT_CONVENTION.get(self.subcommand, Convention.RESIDUE)

    @property
    def resolved_format(self):
        fmt = self.format or DEFAULT_FORMAT[self.subcommand]
        if fmt not in FORMATS[self.subcommand]:
            raise PreconditionError(f"{self.subcommand} writes {sorted(FORMATS[self.subcommand])}, not {fmt}")
        return fmt

    @property
    def resolved_seed(self):
        return settings.seed if self.seed is None else self.seed

    @property
    def output_path(self):
        if self.out is not None:
            return self.out
        return settings.output_dir / f"{self.subcommand}.{EXTENSIONS[self.resolved_format]}"

    def require_n(self):
        if self.n is None:
            raise PreconditionError(f"{self.subcommand} needs --n")
        return self.n

    def rows(self):
        return self.M if self.M is not None else row_count_default(self.require_n())

    def n_range(self):
        n_max = self.n_max if self.n_max is not None else (self.n or DEFAULT_N_MAX)
        if n_max < self.n_min:
            raise PreconditionError(f"empty range: --n-min {self.n_min} > --n-max {n_max}")
        return range(self.n_min, n_max + 1)

    def matrix(self):
        return build_matrix(ResidueSpec(self.require_n(), self.rows(), self.resolved_convention))


def _written(path):
    print(f"✓ wrote {path}")
    return path


def _write_payload(config, payload, matrix):
    if config.resolved_format == "text":
        return _written(write_matrix(matrix, config.output_path))
    return _written(write_json(payload, config.output_path))


def _header(config):
    return {"n": config.require_n(), "M": config.rows(), "convention": config.resolved_convention.value}


# --- Subcommands ---

def _matrix(config):
    A = config.matrix()
    _write_payload(config, {**_header(config), **matrix_payload(A)}, A)
    return 0


def _rank(config):
    values = config.n_range()
    report = verify_rank_claim(values.stop - 1, values.start)
    if config.resolved_format == "csv":
        _written(write_csv(records_table(report.evidence["ranks"], ["n", "rank", "expected", "verdict"]),
                           config.output_path))
    else:
        _written(write_json(report.to_dict(), config.output_path))
    return 1 if report.failed else 0


def _pinv(config):
    A = config.matrix()
    Aplus = pseudoinverse(A)
    check = penrose_check(A, Aplus)
    if not check.all_hold:
        logger.error("Penrose identities %s fail", check.failed)
    _write_payload(config, {**_header(config), "pinv": matrix_payload(Aplus),
                            "penrose": list(check.identities)}, Aplus)
    return 0 if check.all_hold else 1


def _project(config):
    A = config.matrix()
    P = projection(A)
    Pc = P.matvec(constant_vector(A.rows))
    inf_norm = op_norm_inf(P)
    payload = {
        **_header(config),
        "projection": matrix_payload(P),
        "projected_target": [str(x) for x in Pc],
        "inf_norm": str(inf_norm),
        "inf_norm_decimal": format_decimal(inf_norm),
        "two_norm": op_norm_2(P.to_float(), tol=1e-12),
        "trace": str(P.trace()),
    }
    _write_payload(config, payload, P)
    return 0


def _norms(config):
    report = pn_norm_scan(config.n_range())
    df = records_table(report.evidence["norms"], ["n", "M", "pn_inf_norm", "pn_inf_decimal", "pn_2_norm"])
    if config.resolved_format == "csv":
        _written(write_csv(df, config.output_path))
    else:
        _written(write_json(report.to_dict(), config.output_path))
    if config.plot_data:
        _written(emit_plot_data(df, config.plot_data, ["n", "pn_inf_norm", "pn_2_norm"]))
    return 0


def _minimax(config):
    A = config.matrix()
    fit = chebyshev_fit(A, constant_vector(A.rows), config.resolved_convention,
                        exact_threshold=config.exact_threshold, target=config.target)
    _written(write_json({**_header(config), "target": config.target, **fit.to_dict()}, config.output_path))
    return 0


def _lsq(config):
    A = config.matrix()
    c = constant_vector(A.rows)
    fit = lsq_unweighted(A, c, config.resolved_convention)
    trials = config.trials if config.trials is not None else 100
    check = optimality_probe(A, c, fit.coefficients, trials=trials, seed=config.resolved_seed)
    payload = {
        **_header(config),
        "coefficients": fit.coefficients.as_strings(),
        "residual": [str(x) for x in fit.residual],
        "sup_residual": str(fit.sup_residual),
        "float_coefficients": [format_decimal(x) for x in lsq_unweighted_float(A, c)],
        "optimality": {"passed": check.passed, "trials": check.trials},
    }
    _written(write_json(payload, config.output_path))
    return 0 if check else 1


def _distance(config):
    n = config.require_n()
    result = distance(n, config.tol, config.resolved_convention)
    payload = {
        **result.to_dict(),
        "M": lcm_upto(n) - 1,
        "convention": config.resolved_convention.value,
        "tail": default_space().tail_term(lcm_upto(n), config.tol).to_dict(),
        "d_sq": result.d_sq.to_dict(),
        "ill_conditioned": result.ill_conditioned,
    }
    _written(write_json(payload, config.output_path))
    return 0


def _decompose(config):
    report = distance_decomposition(config.require_n(), config.tol)
    _written(write_json(report.to_dict(), config.output_path))
    return 0 if report.dominates else 1


def _scan(config):
    rows = dn_scan(config.n_range(), config.tol, config.workers)
    report = scan_report(rows)
    df = scan_table(rows)
    if config.resolved_format == "csv":
        _written(write_csv(df, config.output_path))
    else:
        _written(write_json(report.to_dict(), config.output_path))
    if config.plot_data:
        _written(emit_plot_data(df, config.plot_data))
    return 1 if report.failed else 0


def _ones(i):
    return 1


def _first_unit(i):
    return int(i == 1)


def _claim_reports(claim, config):
    values = config.n_range()
    seed = config.resolved_seed
    if claim == "rank-full-column":
        return [verify_rank_claim(values.stop - 1, values.start)]
    if claim == "rank-triangular-minor":
        return [triangular_minor_probe(n) for n in values]
    if claim == "monotone-map":
        trials = config.trials if config.trials is not None else 1000
        return [monotone_map_property(trials, seed=seed)]
    if claim == "positive-image":
        return [positive_image_check(n, row_count_default(n), [1] * (n - 1)) for n in values]
    if claim == "projection-norm":
        return [pn_norm_scan(values)]
    if claim == "strong-convergence":
        return [strong_convergence_probe(_ones, values), strong_convergence_probe(_first_unit, values)]
    if claim == "distance-decomposition":
        return [decomposition_probe(n, config.tol) for n in values]
    if claim == "distance-scan":
        return [scan_report(dn_scan(values, config.tol, config.workers))]
    if claim == "minimax-gap":
        return [minimax_gap_probe(n) for n in values]
    raise PreconditionError(f"unknown claim {claim!r}; choose from {', '.join(CLAIMS)} or all")


def _probe(config):
    claims = CLAIMS if config.claim == "all" else (config.claim,)
    reports = [report for claim in claims for report in _claim_reports(claim, config)]
    _written(write_json([r.to_dict() for r in reports], config.output_path))
    failed = [r.claim for r in reports if r.verdict is Verdict.FAILS]
    for claim in failed:
        print(f"✗ {claim}: Fails")
    return 1 if failed else 0


def _plot(config):
    if config.input is None:
        raise PreconditionError("plot needs --input")
    df = read_scan_csv(config.input)
    _written(emit_plot_data(df, config.output_path))
    return 0


HANDLERS = {
    "matrix": _matrix, "rank": _rank, "pinv": _pinv, "project": _project, "norms": _norms,
    "minimax": _minimax, "lsq": _lsq, "distance": _distance, "decompose": _decompose,
    "scan": _scan, "probe": _probe, "plot": _plot,
}


def run(config):
    """Execute one subcommand and map its outcome to an exit status."""
    try:
        # unsupported --format is an input error even when --out names the file
        config.resolved_format
        return HANDLERS[config.subcommand](config)
    except MatrixSizeError as e:
        print(f"✗ {e}", file=sys.stderr)
        logger.error("size cap exceeded: %d x %d > %d", e.rows, e.cols, e.cap)
        return 2
    except LabError as e:
        print(f"✗ {e}", file=sys.stderr)
        return 2


def build_parser():
    parser = argparse.ArgumentParser(description="Residue matrix lab: exact artifacts, solvers and claim probes")
    parser.add_argument("subcommand", choices=SUBCOMMANDS, help="What to compute")
    parser.add_argument("--n", type=int, help="Largest column index (columns k = 2..n)")
    parser.add_argument("--n-min", type=int, default=2, help="First n of a range (default 2)")
    parser.add_argument("--n-max", type=int, help="Last n of a range")
    parser.add_argument("--m", type=int, help="Row count override (default L_n - 1)")
    parser.add_argument("--convention", choices=[c.value for c in Convention],
                        help="Matrix entries: i mod k (residue) or {i/k} (fractional)")
    parser.add_argument("--tol", type=float, help="Class-sum tolerance (default NBBD_TOL)")
    parser.add_argument("--seed", type=lambda s: int(s, 0), help="Random seed (default NBBD_SEED)")
    parser.add_argument("--exact-threshold", type=int, help="Largest row count solved by the exact simplex")
    parser.add_argument("--target", choices=["c", "projected"], default="c",
                        help="Minimax against c or against A A+ c")
    parser.add_argument("--out", help="Output file")
    parser.add_argument("--format", choices=["csv", "json", "text", "dat"], help="Output format")
    parser.add_argument("--workers", type=int, help="Scan threads (default NBBD_WORKERS)")
    parser.add_argument("--trials", type=int, help="Random trials for optimality and monotonicity probes")
    parser.add_argument("--claim", default="all", help=f"Probe to run: {', '.join(CLAIMS)} or all")
    parser.add_argument("--plot-data", help="Also write whitespace-separated plot columns here")
    parser.add_argument("--input", help="Scan CSV to turn into plot data (plot subcommand)")
    parser.add_argument("--verbose", "-v", action="store_true", help="Log progress to stderr")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    return run(RunConfig.from_args(args))
