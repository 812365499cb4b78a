"""Experiment orchestration: config parsing, sweeps, CSV emission.

Config files are flat ``key = value`` text with dotted section prefixes,
e.g. ``system.pathloss = 4.0`` or ``sweep.axis = cache_ratio``.  Unknown
keys are hard errors so typos cannot silently change an experiment.
"""

from __future__ import annotations

import csv
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields, replace

from . import analytics, variants
from .errors import Edge3CError, ParseError, ValidationError
from .mc import TrialConfig, simulate_outage
from .model import SystemParams, derive, validate_params, zipf
from .policy import (most_popular_policy, optimal_policy, regime_breakpoints,
                     uniform_policy)

__all__ = [
    "ExperimentSpec",
    "RunRecord",
    "load_spec",
    "parse_spec",
    "run",
    "emit_csv",
    "resolve_seed",
    "default_config_text",
    "CSV_COLUMNS",
]

SWEEP_AXES = ("latency_D", "cache_ratio", "zipf_gamma", "density", "backhaul_prob")
POLICIES = ("optimal", "most_popular", "uniform")
EVALUATORS = ("closed_form", "asymptotic", "bounds", "monte_carlo")
VARIANTS = ("backhaul_only", "cache_backhaul", "hierarchical", "colocated_compare")

# Wall time is tracked on the record but deliberately kept out of the CSV:
# the file must be byte-identical across reruns of the same seeded spec.
CSV_COLUMNS = ("sweep_value", "policy", "evaluator", "outage", "lower", "upper",
               "d_star", "kappa_prime", "kappa_t", "error")

_SYSTEM_KEYS = {f.name for f in fields(SystemParams)}

SEED_ENV_VAR = "EDGE3C_SEED"


@dataclass(frozen=True)
class BackhaulSpec:
    avail_prob: float
    latency: float
    storage: float


@dataclass(frozen=True)
class ExperimentSpec:
    base: SystemParams
    sweep_axis: str
    sweep_values: tuple[float, ...]
    policies: tuple[str, ...]
    evaluators: tuple[str, ...]
    variant: str | None
    mc: TrialConfig
    backhaul: BackhaulSpec | None
    seed_given: bool  # whether mc.seed appeared in the config


@dataclass(frozen=True)
class RunRecord:
    sweep_value: float
    policy: str
    evaluator: str
    outage: float | None = None
    lower: float | None = None
    upper: float | None = None
    d_star: float | None = None
    kappa_prime: float | None = None
    kappa_t: float | None = None
    wall_time: float = 0.0
    error: str | None = None


_DEFAULT_SYSTEM = {
    "lambda_bs": 5e-3,
    "tx_power": 10.0,
    "noise_power": 1e-5,
    "pathloss": 4.0,
    "nakagami_m": 1.0,
    "bandwidth": 1e6,
    "compute_rate": 1e9,
    "upload_bits": 1e5,
    "download_bits": 1e6,
    "compute_scale_up": 100.0,
    "compute_scale_down": 100.0,
    "latency": 0.5,
    "library_size": 500,
    "cache_size": 50.0,
    "zipf_gamma": 0.8,
}


def default_config_text() -> str:
    """The documented default scenario (values are illustrative, not claims)."""
    lines = ["# edge3c default scenario"]
    for key, value in _DEFAULT_SYSTEM.items():
        lines.append(f"system.{key} = {value}")
    lines += [
        "sweep.axis = cache_ratio",
        "sweep.values = 0.02, 0.05, 0.1, 0.2, 0.3",
        "run.policies = optimal, most_popular, uniform",
        "run.evaluators = closed_form, asymptotic, monte_carlo",
        "mc.trials = 2000",
        "mc.seed = 42",
    ]
    return "\n".join(lines) + "\n"


def _parse_value(key: str, text: str, line_no: int):
    try:
        if key == "library_size":
            return int(text)
        return float(text)
    except ValueError:
        raise ParseError(f"line {line_no}: cannot parse value for {key!r}: {text!r}")


def parse_spec(text: str, source: str = "<string>") -> ExperimentSpec:
    """Parse and validate a config given as text."""
    system = dict(_DEFAULT_SYSTEM)
    sweep_axis = None
    sweep_values: tuple[float, ...] | None = None
    policies = ("optimal",)
    evaluators = ("closed_form",)
    variant = None
    mc_opts = {"trials": 10000, "seed": 0, "disk_radius": None, "truncation_eps": 1e-4}
    seed_given = False
    backhaul: dict[str, float] = {}

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"line {line_no}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key.startswith("system."):
            name = key[len("system."):]
            if name not in _SYSTEM_KEYS:
                raise ParseError(f"line {line_no}: unknown system parameter {name!r}")
            system[name] = _parse_value(name, value, line_no)
        elif key == "sweep.axis":
            if value not in SWEEP_AXES:
                raise ParseError(
                    f"line {line_no}: unknown sweep axis {value!r}; "
                    f"choose from {', '.join(SWEEP_AXES)}")
            sweep_axis = value
        elif key == "sweep.values":
            try:
                sweep_values = tuple(float(v) for v in value.split(","))
            except ValueError:
                raise ParseError(f"line {line_no}: bad sweep values {value!r}")
        elif key == "run.policies":
            policies = tuple(v.strip() for v in value.split(","))
            for name in policies:
                if name not in POLICIES:
                    raise ParseError(f"line {line_no}: unknown policy {name!r}")
        elif key == "run.evaluators":
            evaluators = tuple(v.strip() for v in value.split(","))
            for name in evaluators:
                if name not in EVALUATORS:
                    raise ParseError(f"line {line_no}: unknown evaluator {name!r}")
        elif key == "run.variant":
            if value not in VARIANTS:
                raise ParseError(f"line {line_no}: unknown variant {value!r}")
            variant = value
        elif key == "mc.trials":
            mc_opts["trials"] = int(float(value))
        elif key == "mc.seed":
            mc_opts["seed"] = int(float(value))
            seed_given = True
        elif key == "mc.disk_radius":
            mc_opts["disk_radius"] = float(value)
        elif key == "mc.truncation_eps":
            mc_opts["truncation_eps"] = float(value)
        elif key.startswith("backhaul."):
            name = key[len("backhaul."):]
            if name not in ("avail_prob", "latency", "storage"):
                raise ParseError(f"line {line_no}: unknown backhaul key {name!r}")
            backhaul[name] = float(value)
        else:
            raise ParseError(f"line {line_no}: unknown key {key!r}")

    try:
        base = validate_params(SystemParams(**system))
    except Edge3CError as exc:
        # A config that parses but violates a parameter invariant is a
        # validation failure of the spec, not a runtime error.
        raise ValidationError(f"{source}: {exc}") from exc

    if sweep_axis is None:
        sweep_axis = "cache_ratio"
        if sweep_values is None:
            sweep_values = (base.cache_size / base.library_size,)
    if sweep_values is None or not sweep_values:
        raise ValidationError(f"{source}: sweep.values must be non-empty")
    diffs = [b - a for a, b in zip(sweep_values, sweep_values[1:])]
    if diffs and not (all(d > 0 for d in diffs) or all(d < 0 for d in diffs)):
        raise ValidationError(f"{source}: sweep.values must be strictly monotone")

    gammas = sweep_values if sweep_axis == "zipf_gamma" else (base.zipf_gamma,)
    if "asymptotic" in evaluators and any(g == 1.0 for g in gammas):
        raise ValidationError(
            f"{source}: asymptotic evaluator excludes zipf gamma = 1")
    if "bounds" in evaluators and any(g <= 1.0 for g in gammas):
        raise ValidationError(
            f"{source}: bounds evaluator is defined for zipf gamma > 1 only")
    if sweep_axis == "backhaul_prob" and variant not in ("backhaul_only", "cache_backhaul"):
        raise ValidationError(
            f"{source}: sweeping backhaul_prob needs a backhaul variant")
    if variant in ("backhaul_only", "cache_backhaul", "hierarchical") and not backhaul:
        raise ValidationError(f"{source}: variant {variant!r} needs a backhaul section")

    bh = BackhaulSpec(avail_prob=backhaul.get("avail_prob", 1.0),
                      latency=backhaul.get("latency", 0.0),
                      storage=backhaul.get("storage", 0.0)) if backhaul else None
    return ExperimentSpec(base=base, sweep_axis=sweep_axis,
                          sweep_values=tuple(sweep_values),
                          policies=policies, evaluators=evaluators,
                          variant=variant, mc=TrialConfig(**mc_opts),
                          backhaul=bh, seed_given=seed_given)


def load_spec(path: str) -> ExperimentSpec:
    """Parse and validate a config file."""
    with open(path, "r", encoding="utf-8") as handle:
        return parse_spec(handle.read(), source=path)


def resolve_seed(spec: ExperimentSpec, flag_seed: int | None = None) -> int:
    """Seed priority: CLI flag > spec file > EDGE3C_SEED env var > 0."""
    if flag_seed is not None:
        return flag_seed
    if spec.seed_given:
        return spec.mc.seed
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        return int(env)
    return 0


def _apply_axis(spec: ExperimentSpec, value: float) -> tuple[SystemParams, BackhaulSpec | None]:
    base, bh = spec.base, spec.backhaul
    if spec.sweep_axis == "latency_D":
        return replace(base, latency=value), bh
    if spec.sweep_axis == "cache_ratio":
        return replace(base, cache_size=value * base.library_size), bh
    if spec.sweep_axis == "zipf_gamma":
        return replace(base, zipf_gamma=value), bh
    if spec.sweep_axis == "density":
        return replace(base, lambda_bs=value), bh
    return base, BackhaulSpec(avail_prob=value, latency=bh.latency, storage=bh.storage)


def _build_policy(name: str, pop, kappa_prime: float, budget: float):
    if name == "optimal":
        return optimal_policy(pop, kappa_prime, budget)
    if name == "most_popular":
        return most_popular_policy(pop.size, budget)
    return uniform_policy(pop.size, budget)


def _maybe_d_star(params, derived, value: float | None) -> float | None:
    if value is None or params.zipf_gamma >= 1.0:
        return None
    limit = (1.0 - params.zipf_gamma) * math.exp(params.zipf_gamma)
    if not 0.0 < value < limit:
        return None
    return analytics.min_latency(params, derived, value).d_star


def _evaluate(spec: ExperimentSpec, value: float, policy_name: str,
              evaluator: str, seed: int) -> RunRecord:
    start = time.perf_counter()
    try:
        params, bh_spec = _apply_axis(spec, value)
        params = validate_params(params)
        derived = derive(params)
        pop = zipf(params.library_size, params.zipf_gamma)
        policy = _build_policy(policy_name, pop, derived.kappa_prime, params.cache_size)
        bh = None
        if bh_spec is not None and spec.variant in ("backhaul_only", "cache_backhaul",
                                                    "hierarchical"):
            bh = variants.make_backhaul(params, bh_spec.avail_prob,
                                        bh_spec.latency, bh_spec.storage)

        outage_val: float | None = None
        lower = upper = None

        if evaluator == "closed_form":
            if spec.variant == "backhaul_only":
                outage_val = variants.backhaul_only_outage(bh)
            elif spec.variant == "cache_backhaul":
                outage_val = variants.cache_plus_backhaul_outage(policy, pop, derived, bh)
            elif spec.variant == "hierarchical":
                if policy_name == "optimal":
                    outage_val = variants.hierarchical_optimize(
                        pop, derived, bh, params.cache_size).outage
                else:
                    outage_val = (math.exp(-bh.kappa_b * bh.storage / pop.size)
                                  * analytics.outage(policy, pop, derived))
            elif spec.variant == "colocated_compare":
                outage_val = variants.colocated_vs_distributed(params, derived, value
                                                               if spec.sweep_axis == "density"
                                                               else 1.0)[1]
            else:
                outage_val = analytics.outage(policy, pop, derived)
        elif evaluator == "asymptotic":
            if policy_name == "optimal":
                regime = regime_breakpoints(params, derived)
                if params.zipf_gamma < 1.0:
                    outage_val = analytics.asymptotic_outage_lt1(
                        params, derived, regime).value
                else:
                    pair = analytics.asymptotic_outage_gt1(params, derived, regime)
                    lower, upper = pair.lower, pair.upper
            else:
                ref = analytics.reference_outage(policy_name, params, derived)
                if isinstance(ref, analytics.OutageBounds):
                    lower, upper = ref.lower, ref.upper
                else:
                    outage_val = ref
        elif evaluator == "bounds":
            if policy_name == "optimal":
                regime = regime_breakpoints(params, derived)
                pair = analytics.asymptotic_outage_gt1(params, derived, regime)
            else:
                pair = analytics.reference_outage(policy_name, params, derived)
                if not isinstance(pair, analytics.OutageBounds):
                    outage_val = pair
                    pair = None
            if pair is not None:
                lower, upper = pair.lower, pair.upper
        else:  # monte_carlo
            cfg = TrialConfig(trials=spec.mc.trials, seed=seed,
                              disk_radius=spec.mc.disk_radius,
                              truncation_eps=spec.mc.truncation_eps)
            est = simulate_outage(policy, pop, params, cfg)
            outage_val = est.mean

        return RunRecord(
            sweep_value=value, policy=policy_name, evaluator=evaluator,
            outage=outage_val, lower=lower, upper=upper,
            d_star=_maybe_d_star(params, derived, outage_val),
            kappa_prime=derived.kappa_prime, kappa_t=derived.kappa_t,
            wall_time=time.perf_counter() - start)
    except Edge3CError as exc:
        return RunRecord(sweep_value=value, policy=policy_name, evaluator=evaluator,
                         wall_time=time.perf_counter() - start,
                         error=type(exc).__name__)


def run(spec: ExperimentSpec, seed: int | None = None,
        threads: int = 1) -> list[RunRecord]:
    """Execute the sweep; one record per (value, policy, evaluator).

    Per-point failures become error rows rather than aborting the sweep.
    The returned list is sorted so output is order-independent of the
    thread pool.
    """
    actual_seed = resolve_seed(spec, seed)
    cells = [(value, policy, evaluator)
             for value in spec.sweep_values
             for policy in spec.policies
             for evaluator in spec.evaluators]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(
                lambda cell: _evaluate(spec, *cell, seed=actual_seed), cells))
    else:
        records = [_evaluate(spec, *cell, seed=actual_seed) for cell in cells]
    records.sort(key=lambda r: (r.sweep_value, r.policy, r.evaluator))
    return records


def _fmt(value: float | None) -> str:
    if value is None:
        return ""
    return f"{value:.12g}"


def emit_csv(records: list[RunRecord], path: str) -> None:
    """Write records as CSV: fixed header, 12 significant digits, sorted rows."""
    ordered = sorted(records, key=lambda r: (r.sweep_value, r.policy, r.evaluator))
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, quoting=csv.QUOTE_MINIMAL, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for rec in ordered:
            writer.writerow([
                _fmt(rec.sweep_value), rec.policy, rec.evaluator,
                _fmt(rec.outage), _fmt(rec.lower), _fmt(rec.upper),
                _fmt(rec.d_star), _fmt(rec.kappa_prime), _fmt(rec.kappa_t),
                rec.error or "",
            ])
