"""Command-line interface.

Subcommands:
  analyze   evaluate every configured evaluator at the base operating point
  optimize  print the optimal caching policy vector
  simulate  Monte Carlo estimate only
  sweep     full experiment sweep to CSV (optionally with figures)
  compare   policies side by side over the sweep

Exit codes: 0 success, 1 config/validation error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from . import analytics
from .errors import Edge3CError, ParseError, ValidationError
from .harness import (default_config_text, emit_csv, load_spec, parse_spec,
                      resolve_seed, run)
from .mc import TrialConfig, simulate_outage
from .model import derive, validate_params, zipf
from .policy import optimal_policy


def _load(args) -> "ExperimentSpec":
    if args.config is None:
        return parse_spec(default_config_text(), source="<default>")
    return load_spec(args.config)


def _cmd_analyze(args) -> int:
    spec = _load(args)
    point = replace(spec, sweep_values=(spec.sweep_values[0],))
    records = run(point, seed=args.seed, threads=args.threads)
    for rec in records:
        if rec.error:
            print(f"{rec.policy:>13s} {rec.evaluator:<12s} ERROR {rec.error}")
        elif rec.outage is not None:
            extra = f"  D*={rec.d_star:.6g}s" if rec.d_star is not None else ""
            print(f"{rec.policy:>13s} {rec.evaluator:<12s} outage={rec.outage:.6g}{extra}")
        else:
            print(f"{rec.policy:>13s} {rec.evaluator:<12s} "
                  f"bounds=[{rec.lower:.6g}, {rec.upper:.6g}]")
    if args.out:
        emit_csv(records, args.out)
    return 0


def _cmd_optimize(args) -> int:
    spec = _load(args)
    params = validate_params(spec.base)
    derived = derive(params)
    pop = zipf(params.library_size, params.zipf_gamma)
    policy = optimal_policy(pop, derived.kappa_prime, params.cache_size)
    print(f"# kappa_prime = {derived.kappa_prime:.12g}, budget = {params.cache_size}")
    for f in range(1, pop.size + 1):
        print(f"{f} {policy.prob(f):.12g}")
    print(f"# outage = {analytics.outage(policy, pop, derived):.12g}", file=sys.stderr)
    return 0


def _cmd_simulate(args) -> int:
    spec = _load(args)
    params = validate_params(spec.base)
    derived = derive(params)
    pop = zipf(params.library_size, params.zipf_gamma)
    policy = optimal_policy(pop, derived.kappa_prime, params.cache_size)
    cfg = TrialConfig(trials=spec.mc.trials, seed=resolve_seed(spec, args.seed),
                      disk_radius=spec.mc.disk_radius,
                      truncation_eps=spec.mc.truncation_eps)
    est = simulate_outage(policy, pop, params, cfg)
    exact = analytics.outage(policy, pop, derived)
    print(f"monte-carlo outage = {est.mean:.6g} +/- {est.stderr:.2g} "
          f"({est.trials} trials, seed {est.seed})")
    print(f"closed-form outage = {exact:.6g}")
    return 0


def _cmd_sweep(args) -> int:
    spec = _load(args)
    records = run(spec, seed=args.seed, threads=args.threads)
    emit_csv(records, args.out)
    print(f"wrote {len(records)} rows to {args.out}")
    if args.figures:
        from .figures import render_figures
        for path in render_figures(records, args.figures, spec.sweep_axis):
            print(f"wrote {path}")
    return 0


def _cmd_compare(args) -> int:
    spec = _load(args)
    spec = replace(spec, policies=("most_popular", "optimal", "uniform"),
                   evaluators=("closed_form",))
    records = run(spec, seed=args.seed, threads=args.threads)
    emit_csv(records, args.out)
    print(f"wrote {len(records)} rows to {args.out}")
    if args.figures:
        from .figures import render_figures
        for path in render_figures(records, args.figures, spec.sweep_axis):
            print(f"wrote {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="edge3c",
        description="Delay-outage analysis for cache-and-compute wireless edge networks")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, func in [("analyze", _cmd_analyze), ("optimize", _cmd_optimize),
                       ("simulate", _cmd_simulate), ("sweep", _cmd_sweep),
                       ("compare", _cmd_compare)]:
        cmd = sub.add_parser(name)
        cmd.add_argument("--config", metavar="PATH", default=None,
                         help="experiment config file (defaults to the built-in scenario)")
        cmd.add_argument("--out", metavar="PATH",
                         default="edge3c_out.csv" if name in ("sweep", "compare") else None,
                         help="CSV output path")
        cmd.add_argument("--seed", type=int, default=None,
                         help="override the Monte Carlo seed")
        cmd.add_argument("--threads", type=int, default=1,
                         help="worker threads for sweep points")
        if name in ("sweep", "compare"):
            cmd.add_argument("--figures", metavar="DIR", default=None,
                             help="also render figures into this directory")
        cmd.set_defaults(func=func)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Edge3CError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
