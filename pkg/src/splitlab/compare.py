"""Side-by-side runs of SPLIT on generated formulas and of the recursion.

Each trial generates a symmetric homogeneous formula, decides it with a
trace, runs the model from the same ``(m, n, k)`` and joins the two clause
count trajectories on the step index.  Nothing here judges the model; the
report only measures how far the two drift apart.
"""

from __future__ import annotations

import math
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial

from .cnf import compute_stats
from .gen import U64_MAX, GenSpec, generate
from .model import ModelParams, Outcome, run
from .split import ReductionConfig, Verdict, decide


@dataclass(frozen=True)
class JoinedRow:
    trial: int
    j: int
    emp_n: int | None
    emp_m: int | None
    emp_x: float | None
    model_n: int | None
    model_m: float | None
    model_x: float | None

    @property
    def ratio(self) -> float | None:
        """Empirical over model clause count, where both exist."""
        if self.emp_m is None or self.model_m is None:
            return None
        if self.model_m == 0:
            return math.inf if self.emp_m else 1.0
        return _as_float(self.emp_m) / self.model_m


@dataclass
class TrialReport:
    trial: int
    seed: int
    verdict: Verdict
    model_class: Outcome
    rows: list[JoinedRow] = field(default_factory=list)

    @property
    def budget(self) -> bool:
        return self.verdict is Verdict.BUDGET

    @property
    def agreement(self) -> bool:
        """Budget trip on the empirical side iff runaway on the model side."""
        return self.budget == (self.model_class is Outcome.HARD)

    @property
    def max_rel_gap(self) -> float | None:
        gaps = []
        for row in self.rows:
            if row.emp_m is None or row.model_m is None or row.model_m <= 0:
                continue
            gaps.append(abs(_as_float(row.emp_m) - row.model_m) / row.model_m)
        return max(gaps) if gaps else None

    @property
    def first_2x_step(self) -> int | None:
        """First step where the two clause counts differ by a factor of two."""
        for row in self.rows:
            if row.emp_m is None or row.model_m is None:
                continue
            lo, hi = sorted((_as_float(row.emp_m), row.model_m))
            if hi >= 2 * lo and hi > 0:
                return row.j
        return None

    def summary(self) -> dict:
        return {
            "trial": self.trial,
            "seed": self.seed,
            "verdict": self.verdict.value,
            "model_class": self.model_class.value,
            "status": "budget" if self.budget else "ok",
            "max_rel_gap": self.max_rel_gap,
            "first_2x_step": self.first_2x_step,
            "agreement": self.agreement,
        }


@dataclass
class ComparisonReport:
    n: int
    m: int
    k: int
    trials: list[TrialReport]

    @property
    def rows(self) -> list[JoinedRow]:
        return [row for t in self.trials for row in t.rows]

    def metrics(self) -> dict:
        decided = [t for t in self.trials if not t.budget]
        gaps = [t.max_rel_gap for t in decided if t.max_rel_gap is not None]
        firsts = [t.first_2x_step for t in decided if t.first_2x_step is not None]
        return {
            "n": self.n,
            "m": self.m,
            "k": self.k,
            "trials": len(self.trials),
            "decided": len(decided),
            "budget_trials": len(self.trials) - len(decided),
            "mean_max_rel_gap": statistics.fmean(gaps) if gaps else None,
            "max_max_rel_gap": max(gaps) if gaps else None,
            "median_first_2x_step": statistics.median(firsts) if firsts else None,
            "trials_diverging_2x": len(firsts),
            "agreement_rate": (
                sum(t.agreement for t in self.trials) / len(self.trials) if self.trials else None
            ),
            "per_trial": [t.summary() for t in self.trials],
        }


def _as_float(v: int | float) -> float:
    try:
        return float(v)
    except OverflowError:
        return math.inf


def trial_seed(base: int, trial: int) -> int:
    return (base + trial) & U64_MAX


def run_trial(
    trial: int,
    n: int,
    m: int,
    k: int,
    seed: int,
    cfg: ReductionConfig,
    params: ModelParams,
) -> TrialReport:
    s = trial_seed(seed, trial)
    f = generate(GenSpec(n, m, k, s))
    stats = compute_stats(f)
    decision = decide(f, cfg)
    traj = run(m, n, k, params)

    emp: dict[int, tuple[int, int, float | None]] = {0: (n, stats.m, stats.x)}
    for pt in decision.trajectory:
        emp[pt.j] = (pt.n, pt.m, pt.x)
    mod = {pt.j: (pt.n, pt.m, pt.x) for pt in traj.points}
    rows = []
    for j in range(max(max(emp), max(mod)) + 1):
        e = emp.get(j)
        d = mod.get(j)
        rows.append(
            JoinedRow(
                trial,
                j,
                e[0] if e else None,
                e[1] if e else None,
                e[2] if e else None,
                d[0] if d else None,
                d[1] if d else None,
                d[2] if d else None,
            )
        )
    return TrialReport(trial, s, decision.verdict, traj.classification.outcome, rows)


def compare(
    n: int,
    m: int,
    k: int,
    seed: int = 0,
    trials: int = 10,
    cfg: ReductionConfig | None = None,
    params: ModelParams | None = None,
    jobs: int = 1,
) -> ComparisonReport:
    """Run ``trials`` joined experiments; trial ``t`` uses seed ``seed + t`` (mod 2**64)."""
    cfg = cfg or ReductionConfig()
    params = params or ModelParams()
    GenSpec(n, m, k, seed)  # validate before fanning out
    if trials < 1:
        raise ValueError("trials must be >= 1")
    work = partial(run_trial, n=n, m=m, k=k, seed=seed, cfg=cfg, params=params)
    if jobs > 1 and trials > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(work, range(trials)))
    else:
        reports = [work(t) for t in range(trials)]
    return ComparisonReport(n, m, k, reports)
