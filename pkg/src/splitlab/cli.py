"""Command-line front end.

Exit codes: 0 success or decided verdict, 2 usage/validation error,
3 clause budget exceeded, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
import warnings
from pathlib import Path

from . import report
from .cnf import CnfError, compute_stats, parse_dimacs, write_dimacs
from .compare import compare
from .gen import GenerationError, GenSpec, generate, parse_seed
from .model import ModelParams, RMode, run, running_time
from .scan import ScanError, fit_power_law, scan_k, scan_line
from .split import DEFAULT_BUDGET, OrderPolicy, ReductionConfig, Verdict, decide

log = logging.getLogger("splitlab")

EXIT_OK, EXIT_USAGE, EXIT_BUDGET, EXIT_IO = 0, 2, 3, 4

REDUCTIONS = {
    "all": dict(drop_tautologies=True, drop_duplicates=True, drop_subsumed=True),
    "dup": dict(drop_tautologies=True, drop_duplicates=True, drop_subsumed=False),
    "taut": dict(drop_tautologies=True, drop_duplicates=False, drop_subsumed=False),
    "none": dict(drop_tautologies=False, drop_duplicates=False, drop_subsumed=False),
}


class UsageError(Exception):
    pass


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise UsageError(message)


def _seed(text: str) -> int:
    try:
        return parse_seed(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _sibling(path: str, suffix: str) -> Path:
    p = Path(path)
    return p.with_name(p.stem + suffix)


def _emit(text: str, out: str | None) -> None:
    if out:
        report.atomic_write(out, text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# shared flag groups


def _add_model_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("model")
    g.add_argument("--alpha", type=float, default=0.0, help="removed fraction of new clauses")
    g.add_argument("--lambda", dest="lam", type=float, default=1.0,
                   help="filling ratio of removed clauses, 1 <= lambda <= 1/alpha")
    g.add_argument("--r-mode", choices=[m.value for m in RMode], default=RMode.FILLING.value,
                   help="attenuation exponent: k2 = x*n-2, n2 = n-2")
    g.add_argument("--easy-threshold", type=float, default=1.0)
    g.add_argument("--blowup-factor", type=float, default=2.0,
                   help="Hard once m_j > m0 * factor**n0")


def _model_params(args) -> ModelParams:
    try:
        return ModelParams(
            alpha=args.alpha,
            lam=args.lam,
            r_mode=RMode(args.r_mode),
            easy_threshold=args.easy_threshold,
            blowup_factor=args.blowup_factor,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _add_split_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("SPLIT")
    g.add_argument("--reductions", choices=list(REDUCTIONS), default="all",
                   help="all: tautologies+duplicates+subsumed; dup: tautologies+duplicates; "
                        "taut: tautologies only; none")
    g.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="clause budget")
    g.add_argument("--order", choices=[o.value for o in OrderPolicy], default=OrderPolicy.FIXED_INDEX.value)


def _reduction_config(args) -> ReductionConfig:
    _require(args.budget >= 1, "--budget must be positive")
    return ReductionConfig(
        clause_budget=args.budget, order_policy=OrderPolicy(args.order), **REDUCTIONS[args.reductions]
    )


# ---------------------------------------------------------------------------
# subcommands


def cmd_model_run(args) -> int:
    _require(args.k0 >= 2, "k0 must be ≥ 2")
    _require(args.n0 >= 2, "n0 must be >= 2")
    _require(args.k0 <= args.n0, "k0 must be <= n0")
    _require(args.m0 >= 0 and math.isfinite(args.m0), "m0 must be finite and >= 0")
    params = _model_params(args)
    traj = run(args.m0, args.n0, args.k0, params)
    summary = traj.summary()
    summary_text = report.to_json(summary)
    _emit(report.model_csv(traj), args.out)
    if args.out:
        report.atomic_write(args.summary or _sibling(args.out, ".summary.json"), summary_text)
    elif args.summary:
        report.atomic_write(args.summary, summary_text)
    if args.plot:
        from .plotting import plot_model_run

        plot_model_run(traj, args.plot)
    sys.stdout.write(summary_text)
    log.info("%s, running time %.6g", summary["class"], running_time(traj))
    return EXIT_OK


def _fit_output(args, line):
    if not args.fit:
        return None
    try:
        fit = fit_power_law(line)
    except ValueError as exc:
        raise UsageError(f"cannot fit: {exc}") from None
    return fit


def cmd_model_scan(args) -> int:
    if args.n:
        n_values = args.n
    else:
        _require(args.n_from is not None and args.n_to is not None,
                 "give --n or both --n-from and --n-to")
        _require(args.n_step >= 1, "--n-step must be >= 1")
        n_values = list(range(args.n_from, args.n_to + 1, args.n_step))
    _require(bool(n_values), "empty n grid")
    _require(args.k >= 2, "k must be >= 2")
    _require(args.resolution > 0, "--resolution must be positive")
    params = _model_params(args)
    try:
        line = scan_line(args.k, n_values, params, args.resolution, args.jobs)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    except ScanError as exc:
        log.error("%s", exc)
        _emit(report.line_csv([], params.alpha, params.lam), args.out)
        return EXIT_USAGE
    _emit(report.line_csv(line.entries, params.alpha, params.lam), args.out)
    fit = _fit_output(args, line)
    if fit is not None:
        text = report.to_json(fit.as_dict())
        target = args.fit_out or (_sibling(args.out, ".fit.json") if args.out else None)
        if target:
            report.atomic_write(target, text)
        sys.stdout.write(text)
    if args.plot:
        from .plotting import plot_line

        plot_line([(f"k={args.k:g}, alpha={params.alpha:g}, lambda={params.lam:g}", line)], args.plot, fit)
    for e in line.failures:
        log.warning("n=%d: %s", e.n, e.error)
    return EXIT_OK


def cmd_model_kscan(args) -> int:
    if args.k:
        k_values = args.k
    else:
        _require(args.k_from is not None and args.k_to is not None,
                 "give --k or both --k-from and --k-to")
        _require(args.k_step > 0, "--k-step must be positive")
        count = int(math.floor((args.k_to - args.k_from) / args.k_step + 1e-9)) + 1
        k_values = [args.k_from + i * args.k_step for i in range(max(count, 0))]
    _require(bool(k_values), "empty k grid")
    _require(all(k >= 2 for k in k_values), "every k must be >= 2")
    _require(all(k <= args.n for k in k_values), "every k must be <= n")
    _require(args.resolution > 0, "--resolution must be positive")
    params = _model_params(args)
    entries = scan_k(args.n, k_values, params, args.resolution, args.jobs)
    _emit(report.line_csv(entries, params.alpha, params.lam), args.out)
    if args.plot:
        from .plotting import plot_kscan

        plot_kscan(entries, args.plot)
    for e in entries:
        if not e.ok:
            log.warning("k=%g: %s", e.k, e.error)
    return EXIT_OK


def cmd_fit(args) -> int:
    try:
        text = Path(args.line).read_text()
    except OSError as exc:
        log.error("cannot read %s: %s", args.line, exc)
        return EXIT_IO
    pairs = [(n, m_c) for n, _, m_c in report.read_line_csv(text)]
    try:
        fit = fit_power_law(pairs)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit(report.to_json(fit.as_dict()), args.out)
    return EXIT_OK


def cmd_split_run(args) -> int:
    cfg = _reduction_config(args)
    try:
        text = Path(args.input).read_text()
    except OSError as exc:
        log.error("cannot read %s: %s", args.input, exc)
        return EXIT_IO
    try:
        formula = parse_dimacs(text)
    except CnfError as exc:
        log.error("%s: %s", args.input, exc)
        return EXIT_USAGE
    decision = decide(formula, cfg)
    if args.trace:
        report.atomic_write(args.trace, report.trace_csv(decision.trajectory))
    print(decision.verdict.value)
    if decision.verdict is Verdict.BUDGET:
        log.warning("budget %d exceeded at step %d with %d clauses",
                    cfg.clause_budget, decision.budget_step, decision.budget_clauses)
        return EXIT_BUDGET
    return EXIT_OK


def cmd_gen(args) -> int:
    try:
        spec = GenSpec(args.n, args.m, args.k, args.seed, args.max_retries)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            formula = generate(spec)
    except GenerationError as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    _emit(write_dimacs(formula), args.out)
    stats_line = compute_stats(formula).line()
    print(stats_line, file=sys.stdout if args.out else sys.stderr)
    return EXIT_OK


def cmd_compare(args) -> int:
    _require(args.trials >= 1, "--trials must be >= 1")
    cfg = _reduction_config(args)
    params = _model_params(args)
    try:
        GenSpec(args.n, args.m, args.k, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rep = compare(args.n, args.m, args.k, args.seed, args.trials, cfg, params, args.jobs)
    metrics = report.to_json(rep.metrics())
    _emit(report.compare_csv(rep), args.out)
    if args.out:
        report.atomic_write(args.metrics or _sibling(args.out, ".metrics.json"), metrics)
    elif args.metrics:
        report.atomic_write(args.metrics, metrics)
    if args.plot:
        from .plotting import plot_compare

        plot_compare(rep, args.plot)
    sys.stdout.write(metrics)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="splitlab",
        description="SPLIT variable elimination, its mean-field recursion, and the easy/hard line.",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    def out_flags(p, plot=True):
        p.add_argument("--out", help="output file (default: stdout)")
        if plot:
            p.add_argument("--plot", help="also render a PNG figure to this path")

    # model
    model = sub.add_parser("model", help="mean-field recursion")
    msub = model.add_subparsers(dest="model_command", required=True)

    p = msub.add_parser("run", help="iterate the recursion from (m0, n0, k0)")
    p.add_argument("--m0", type=float, required=True)
    p.add_argument("--n0", type=int, required=True)
    p.add_argument("--k0", type=float, required=True)
    p.add_argument("--summary", help="summary JSON path (default: next to --out)")
    _add_model_flags(p)
    out_flags(p)
    p.set_defaults(func=cmd_model_run)

    p = msub.add_parser("scan", help="critical line m_c(n) at fixed k")
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--n", type=int, nargs="+", help="explicit n values")
    p.add_argument("--n-from", type=int)
    p.add_argument("--n-to", type=int)
    p.add_argument("--n-step", type=int, default=1)
    p.add_argument("--resolution", type=float, default=1.0)
    p.add_argument("--fit", action="store_true", help="fit a power law to the line")
    p.add_argument("--fit-out", help="fit JSON path (default: next to --out)")
    p.add_argument("--jobs", type=int, default=1)
    _add_model_flags(p)
    out_flags(p)
    p.set_defaults(func=cmd_model_scan)

    p = msub.add_parser("kscan", help="critical point m_c(k) at fixed n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=float, nargs="+", help="explicit k values")
    p.add_argument("--k-from", type=float)
    p.add_argument("--k-to", type=float)
    p.add_argument("--k-step", type=float, default=1.0)
    p.add_argument("--resolution", type=float, default=1.0)
    p.add_argument("--jobs", type=int, default=1)
    _add_model_flags(p)
    out_flags(p)
    p.set_defaults(func=cmd_model_kscan)

    p = msub.add_parser("fit", help="power-law fit of a line CSV")
    p.add_argument("line", help="line CSV written by 'model scan'")
    out_flags(p, plot=False)
    p.set_defaults(func=cmd_fit)

    # split
    split = sub.add_parser("split", help="run SPLIT on a DIMACS file")
    ssub = split.add_subparsers(dest="split_command", required=True)
    p = ssub.add_parser("run", help="decide a DIMACS CNF file")
    p.add_argument("input", help="DIMACS CNF file")
    p.add_argument("--trace", help="write the per-step trace CSV here")
    _add_split_flags(p)
    p.set_defaults(func=cmd_split_run)

    p = sub.add_parser("gen", help="generate a symmetric homogeneous k-SAT formula")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=_seed, default=0, help="u64, decimal or 0x-hex")
    p.add_argument("--max-retries", type=int, default=100_000)
    out_flags(p, plot=False)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("compare", help="SPLIT on generated formulas vs the recursion")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=_seed, default=0, help="u64 base seed; trial t uses seed+t")
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--metrics", help="metrics JSON path (default: next to --out)")
    p.add_argument("--jobs", type=int, default=1)
    _add_split_flags(p)
    _add_model_flags(p)
    out_flags(p)
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s: %(message)s",
    )
    if getattr(args, "jobs", 1) < 1:
        parser.error("--jobs must be >= 1")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"splitlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"splitlab: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
