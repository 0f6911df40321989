"""CSV/JSON rendering and atomic file output."""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path
from typing import Iterable, Sequence

from .compare import ComparisonReport
from .model import ModelTrajectory
from .scan import ScanEntry
from .split import TracePoint

MODEL_HEADER = ["j", "n", "m", "p", "x", "k", "r", "step_cost", "cum_cost"]
TRACE_HEADER = ["j", "var", "n", "m", "r", "s", "generated", "kept", "k_mean", "p_mean", "x", "step_cost"]
LINE_HEADER = ["n", "k", "alpha", "lambda", "m_c", "status"]
COMPARE_HEADER = [
    "trial", "seed", "j", "emp_n", "emp_m", "emp_x", "model_n", "model_m", "model_x", "ratio", "status",
]


def fmt(value) -> str:
    """Cell text: empty for missing, shortest round-trip repr for floats."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return repr(value)
    return str(value)


def to_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def to_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False, allow_nan=True) + "\n"


def atomic_write(path: str | os.PathLike, data: str | bytes) -> None:
    """Write via a temp file in the target directory, then rename over ``path``."""
    path = Path(path)
    mode = "wb" if isinstance(data, bytes) else "w"
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent or ".")
    try:
        with os.fdopen(fd, mode) as fh:
            fh.write(data)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def model_csv(traj: ModelTrajectory) -> str:
    return to_csv(
        MODEL_HEADER,
        ([p.j, p.n, p.m, p.p, p.x, p.k, p.r, p.step_cost, p.cum_cost] for p in traj.points),
    )


def trace_csv(points: Sequence[TracePoint]) -> str:
    return to_csv(
        TRACE_HEADER,
        (
            [p.j, p.var, p.n, p.m, p.r, p.s, p.generated, p.kept, p.k_mean, p.p_mean, p.x, p.step_cost]
            for p in points
        ),
    )


def line_csv(entries: Sequence[ScanEntry], alpha: float, lam: float) -> str:
    return to_csv(
        LINE_HEADER,
        (
            [e.n, float(e.k), alpha, lam, e.point.m_c if e.point else None, e.status]
            for e in entries
        ),
    )


def read_line_csv(text: str) -> list[tuple[int, float, float]]:
    """``(n, k, m_c)`` of the successful rows of a line CSV."""
    out = []
    for row in csv.DictReader(io.StringIO(text)):
        if row.get("status") == "ok" and row.get("m_c"):
            out.append((int(row["n"]), float(row["k"]), float(row["m_c"])))
    return out


def compare_csv(report: ComparisonReport) -> str:
    rows = []
    for t in report.trials:
        status = "budget" if t.budget else "ok"
        for r in t.rows:
            rows.append(
                [t.trial, t.seed, r.j, r.emp_n, r.emp_m, r.emp_x, r.model_n, r.model_m, r.model_x, r.ratio, status]
            )
    return to_csv(COMPARE_HEADER, rows)
