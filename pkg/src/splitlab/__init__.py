"""SPLIT variable elimination, its mean-field recursion, and the easy/hard transition."""

from .cnf import Formula, FormulaStats, compute_stats, parse_dimacs, write_dimacs
from .gen import GenSpec, generate
from .model import Classification, ModelParams, ModelState, Outcome, RMode, run, running_time, step
from .scan import CriticalLine, CriticalPoint, PowerLawFit, find_critical_m, fit_power_law, scan_k, scan_line
from .split import OrderPolicy, ReductionConfig, Verdict, brute_force, decide, eliminate

__version__ = "0.1.0"

__all__ = [
    "Formula", "FormulaStats", "compute_stats", "parse_dimacs", "write_dimacs",
    "GenSpec", "generate",
    "Classification", "ModelParams", "ModelState", "Outcome", "RMode", "run", "running_time", "step",
    "CriticalLine", "CriticalPoint", "PowerLawFit", "find_critical_m", "fit_power_law", "scan_k", "scan_line",
    "OrderPolicy", "ReductionConfig", "Verdict", "brute_force", "decide", "eliminate",
]
