"""Locate the Easy/Hard boundary of the recursion and fit its growth law."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from typing import Sequence

import numpy as np

from .model import ModelParams, Outcome, classify

UPPER_GUARD = 1e12


class NoTransition(RuntimeError):
    """No Hard starting point below the upper guard."""


class ScanError(RuntimeError):
    """Every point of a scan failed."""


class MonotonicityViolation(RuntimeError):
    def __init__(self, message: str, m_values: tuple[float, ...]):
        super().__init__(message)
        self.m_values = m_values


@dataclass(frozen=True)
class CriticalPoint:
    n: int
    k: float
    m_c: float
    lower: float  # largest m0 seen bounded (Easy or Exhausted)
    upper: float  # smallest m0 seen Hard
    params: ModelParams = field(default_factory=ModelParams)


@dataclass(frozen=True)
class ScanEntry:
    n: int
    k: float
    point: CriticalPoint | None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.point is not None

    @property
    def status(self) -> str:
        return "ok" if self.ok else f"failed: {self.error}"


@dataclass(frozen=True)
class CriticalLine:
    k: float
    entries: tuple[ScanEntry, ...]
    params: ModelParams = field(default_factory=ModelParams)

    @property
    def points(self) -> list[CriticalPoint]:
        return [e.point for e in self.entries if e.point is not None]

    @property
    def failures(self) -> list[ScanEntry]:
        return [e for e in self.entries if not e.ok]


@dataclass(frozen=True)
class PowerLawFit:
    exponent: float
    prefactor: float
    residual: float
    n_points: int

    def as_dict(self) -> dict:
        return {
            "exponent": self.exponent,
            "prefactor": self.prefactor,
            "residual": self.residual,
            "n_points": self.n_points,
        }


def _hard(m0: float, n: int, k: float, params: ModelParams) -> bool:
    # Exhausted counts as bounded
    return classify(m0, n, k, params).outcome is Outcome.HARD


def find_critical_m(
    n: int, k: float, params: ModelParams | None = None, resolution: float = 1.0
) -> CriticalPoint:
    """Bisect for the starting clause count where runs turn from bounded to Hard.

    Brackets by doubling from ``m0 = n``, bisects until the bracket is no
    wider than ``resolution`` and returns its midpoint.  Both ends are
    re-classified afterwards.
    """
    params = params or ModelParams()
    if not k >= 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if k > n:
        raise ValueError(f"k must be <= n, got k={k}, n={n}")
    if not resolution > 0:
        raise ValueError(f"resolution must be positive, got {resolution}")

    lo, hi = 0.0, float(n)
    while not _hard(hi, n, k, params):
        lo = hi
        hi *= 2.0
        if hi > UPPER_GUARD:
            raise NoTransition(f"no Hard start below m0={UPPER_GUARD:g} at n={n}, k={k}")
    while hi - lo > resolution:
        mid = 0.5 * (lo + hi)
        if _hard(mid, n, k, params):
            hi = mid
        else:
            lo = mid
    lo_hard, hi_hard = _hard(lo, n, k, params), _hard(hi, n, k, params)
    if lo_hard or not hi_hard:
        raise MonotonicityViolation(
            f"bracket [{lo}, {hi}] at n={n}, k={k} classifies "
            f"({'Hard' if lo_hard else 'bounded'}, {'Hard' if hi_hard else 'bounded'})",
            (lo, hi),
        )
    return CriticalPoint(n, k, 0.5 * (lo + hi), lo, hi, params)


def _entry(n: int, k: float, params: ModelParams, resolution: float) -> ScanEntry:
    try:
        return ScanEntry(n, k, find_critical_m(n, k, params, resolution))
    except (NoTransition, MonotonicityViolation, ValueError) as exc:
        return ScanEntry(n, k, None, str(exc))


def _evaluate(tasks: Sequence[tuple[int, float]], params, resolution, jobs) -> list[ScanEntry]:
    if jobs <= 1 or len(tasks) <= 1:
        return [_entry(n, k, params, resolution) for n, k in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        # map() yields in submission order, so output does not depend on jobs
        return list(pool.map(partial(_star_entry, params=params, resolution=resolution), tasks))


def _star_entry(task, params, resolution):
    return _entry(task[0], task[1], params, resolution)


def scan_line(
    k: float,
    n_values: Sequence[int],
    params: ModelParams | None = None,
    resolution: float = 1.0,
    jobs: int = 1,
) -> CriticalLine:
    params = params or ModelParams()
    n_values = list(n_values)
    if not n_values:
        raise ValueError("n_values must be non-empty")
    if any(b <= a for a, b in zip(n_values, n_values[1:])):
        raise ValueError("n_values must be strictly ascending")
    entries = _evaluate([(n, k) for n in n_values], params, resolution, jobs)
    line = CriticalLine(k, tuple(entries), params)
    if not line.points:
        raise ScanError(f"every point of the k={k} line failed: {entries[0].error}")
    return line


def scan_k(
    n: int,
    k_values: Sequence[float],
    params: ModelParams | None = None,
    resolution: float = 1.0,
    jobs: int = 1,
) -> list[ScanEntry]:
    params = params or ModelParams()
    return _evaluate([(n, k) for k in k_values], params, resolution, jobs)


def fit_power_law(line: CriticalLine | Sequence[tuple[float, float]]) -> PowerLawFit:
    """Least-squares line through ``(ln n, ln m_c)``; the slope is the exponent."""
    if isinstance(line, CriticalLine):
        pairs = [(p.n, p.m_c) for p in line.points]
    else:
        pairs = [(float(a), float(b)) for a, b in line]
    if len(pairs) < 3:
        raise ValueError(f"need at least 3 points for a fit, got {len(pairs)}")
    if any(a <= 0 or b <= 0 for a, b in pairs):
        raise ValueError("power-law fit needs positive n and m_c")
    lx = np.log([a for a, _ in pairs])
    ly = np.log([b for _, b in pairs])
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    rms = float(math.sqrt(np.mean(resid**2)))
    return PowerLawFit(float(slope), float(math.exp(intercept)), rms, len(pairs))
