"""Figures for the report path.  Every renderer writes one PNG atomically."""

from __future__ import annotations

import io
import math
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .compare import ComparisonReport  # noqa: E402
from .model import ModelTrajectory  # noqa: E402
from .report import atomic_write  # noqa: E402
from .scan import CriticalLine, PowerLawFit, ScanEntry  # noqa: E402

FIGSIZE = (6.4, 4.0)


def _save(fig, path) -> None:
    buf = io.BytesIO()
    # fixed metadata keeps the bytes reproducible
    fig.savefig(buf, format="png", dpi=120, metadata={"Software": None})
    plt.close(fig)
    atomic_write(path, buf.getvalue())


def plot_model_run(traj: ModelTrajectory, path, title: str | None = None) -> None:
    fig, ax = plt.subplots(figsize=FIGSIZE)
    js = [p.j for p in traj.points]
    ax.semilogy(js, [max(p.m, 1e-300) for p in traj.points], "k.-", lw=1)
    pts = traj.points
    peak = max(range(len(pts)), key=lambda i: pts[i].m)
    if traj.classification.outcome.value == "easy" and len(pts) - peak > 2:
        # decay reference read as a per-step factor (1 - xbar^2/2)^xbar with
        # xbar the saturated filling, anchored on the last point; diagnostic only
        last = pts[-1]
        xbar = last.x
        rate = xbar * math.log1p(-xbar * xbar / 2)
        tail = [p.j for p in pts[peak:]]
        ax.semilogy(tail, [last.m * math.exp(rate * (j - last.j)) for j in tail],
                    color="gray", lw=1, ls=":", label=f"decay reference, xbar={xbar:.3f}")
        ax.legend(frameon=False, fontsize=8, loc="lower left")
    ax.set_xlabel("step j")
    ax.set_ylabel("clauses $m_j$")
    ax2 = ax.twinx()
    ax2.plot(js, [p.x for p in traj.points], color="tab:blue", lw=1, ls="--")
    ax2.set_ylabel("filling factor $x_j$", color="tab:blue")
    c = traj.classification
    ax.set_title(title or f"{c.outcome.value} (step {c.step})")
    fig.tight_layout()
    _save(fig, path)


def plot_line(
    lines: Sequence[tuple[str, CriticalLine]], path, fit: PowerLawFit | None = None
) -> None:
    fig, ax = plt.subplots(figsize=FIGSIZE)
    for label, line in lines:
        pts = line.points
        ax.plot([p.n for p in pts], [p.m_c for p in pts], "o-", ms=3, lw=1, label=label)
    if fit is not None and lines:
        ns = [p.n for p in lines[0][1].points]
        grid = [ns[0] + (ns[-1] - ns[0]) * i / 100 for i in range(101)]
        ax.plot(grid, [fit.prefactor * g**fit.exponent for g in grid], "k:", lw=1,
                label=f"fit $\\gamma$={fit.exponent:.3f}")
    ax.set_xlabel("variables $n$")
    ax.set_ylabel("critical clauses $m_c$")
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    _save(fig, path)


def plot_kscan(entries: Sequence[ScanEntry], path) -> None:
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ok = [e for e in entries if e.ok]
    ax.plot([e.k for e in ok], [e.point.m_c for e in ok], "ko-", ms=3, lw=1)
    if ok:
        ax.set_title(f"n = {ok[0].n}")
    ax.set_xlabel("filling $k$")
    ax.set_ylabel("critical clauses $m_c$")
    fig.tight_layout()
    _save(fig, path)


def plot_compare(report: ComparisonReport, path) -> None:
    fig, ax = plt.subplots(figsize=FIGSIZE)
    model_drawn = False
    for t in report.trials:
        rows = [r for r in t.rows if r.emp_m is not None and r.emp_m > 0]
        ys = [math.log10(r.emp_m) for r in rows]
        ax.plot([r.j for r in rows], ys, color="0.6", lw=0.8)
        if not model_drawn:
            mrows = [r for r in t.rows if r.model_m is not None and r.model_m > 0]
            ax.plot([r.j for r in mrows], [math.log10(r.model_m) for r in mrows], "k-", lw=2,
                    label="model")
            model_drawn = True
    ax.plot([], [], color="0.6", lw=0.8, label="SPLIT trials")
    ax.set_xlabel("step j")
    ax.set_ylabel("$\\log_{10} m_j$")
    ax.legend(frameon=False, fontsize=8)
    ax.set_title(f"n={report.n}, m={report.m}, k={report.k}")
    fig.tight_layout()
    _save(fig, path)
