import json
import logging
import os
import tempfile
from fractions import Fraction
from pathlib import Path

import pandas as pd

from .errors import PreconditionError
from .sequences import format_matrix

logger = logging.getLogger(__name__)

SCAN_COLUMNS = ["n", "eps_star", "d_sq_mid", "d_sq_width", "tail_mid", "pn_inf_norm", "pn_2_norm"]


def format_decimal(value):
    """Decimal rendering used by the plot data: 12 significant digits."""
    return f"{float(value):.12g}"


def _cell(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, bool):
        return str(value).lower()
    return value


def scan_table(rows):
    """
    Lay out dn_scan rows as a DataFrame.

    Args:
        rows: ScanRow objects in increasing n

    Returns:
        pd.DataFrame: one line per n; eps_star and pn_inf_norm stay exact as "p/q"
    """
    return pd.DataFrame(
        [[r.n, str(r.eps_star), r.d_sq.mid, r.d_sq.width, r.tail.mid, str(r.pn_inf_norm), r.pn_2_norm]
         for r in rows],
        columns=SCAN_COLUMNS,
    )


def records_table(records, columns=None):
    """DataFrame from a list of dicts, with Fractions as "p/q" strings."""
    df = pd.DataFrame([{k: _cell(v) for k, v in record.items()} for record in records])
    if columns is not None:
        df = df[columns]
    return df


def _atomic_write(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    # temp file in the target directory so os.replace stays on one filesystem
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    logger.debug("wrote %s", path)
    return path


def write_csv(df, path):
    return _atomic_write(path, df.to_csv(index=False, lineterminator="\n"))


def to_json_text(payload):
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def write_json(payload, path):
    return _atomic_write(path, to_json_text(payload))


def write_matrix(matrix, path):
    return _atomic_write(path, format_matrix(matrix))


def matrix_payload(matrix):
    return {"rows": matrix.rows, "cols": matrix.cols,
            "entries": [[str(x) for x in matrix.row(i)] for i in range(matrix.rows)]}


def plot_data(df, columns=None):
    """
    Whitespace-separated columns for external plotting.

    Rational "p/q" cells are converted to decimals; every number gets 12
    significant digits.
    """
    if df.empty:
        raise PreconditionError("nothing to plot: the table is empty")
    columns = list(df.columns) if columns is None else columns
    missing = [c for c in columns if c not in df.columns]
    if missing:
        raise PreconditionError(f"columns not in table: {missing}")

    lines = [" ".join(columns)]
    for _, row in df[columns].iterrows():
        lines.append(" ".join(format_decimal(Fraction(str(v))) if isinstance(v, str) else format_decimal(v)
                              for v in row))
    return "\n".join(lines) + "\n"


def emit_plot_data(df, path, columns=None):
    return _atomic_write(path, plot_data(df, columns))


def read_scan_csv(path):
    path = Path(path)
    if not path.exists():
        raise PreconditionError(f"input file not found: {path}")
    # keep the exact "p/q" columns as text
    return pd.read_csv(path, dtype={"eps_star": str, "pn_inf_norm": str})
