"""Monte Carlo validation of the closed-form success/outage expressions.

Per trial we realize the dataset-holding BS process directly: the marginal
law of the BSs caching dataset f is a thinned PPP of density lambda * p(f),
so per-request thinning is exact without committing to any joint placement.
BS positions are drawn uniformly on a disk whose radius is chosen so that
the expected number of *qualifying* BSs (received power above threshold)
beyond it stays below a configured epsilon.

Trials are processed in fixed-size chunks, each with its own RNG stream
derived from (seed, chunk index), so estimates are bit-identical no matter
how the work is scheduled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import DomainError, TruncationError
from .model import DerivedParams, Popularity, SystemParams, derive, validate_params
from .policy import CachingPolicy

__all__ = [
    "TrialConfig",
    "OutageEstimate",
    "truncation_radius",
    "simulate_task_success",
    "simulate_outage",
    "qualifying_counts",
]

CHUNK = 8192          # trials per RNG stream; fixed so results are schedule-independent
RADIUS_CAP = 1e9      # meters; auto-radius beyond this raises TruncationError


@dataclass(frozen=True)
class TrialConfig:
    trials: int
    seed: int = 0
    disk_radius: float | None = None   # None selects the auto radius
    truncation_eps: float = 1e-4       # expected missed qualifying BSs beyond R


@dataclass(frozen=True)
class OutageEstimate:
    mean: float
    stderr: float
    trials: int
    seed: int


def _threshold(params: SystemParams, derived: DerivedParams) -> float:
    """SNR threshold T = 2^rho - 1 a BS must beat for the deadline to hold."""
    return 2.0 ** derived.required_rate - 1.0


def _tail_mean(params: SystemParams, derived: DerivedParams,
               p: float, radius: float) -> float:
    """Expected number of qualifying BSs beyond the given radius.

    With c = m*T/eta and y = c*R^alpha the tail integral reduces to
    lambda*p*2*pi*c^(-delta)/alpha *
        [Gamma(m+delta)*Q(m+delta, y)/(delta*Gamma(m)) - y^delta*Q(m, y)/delta],
    which at R = 0 recovers the full-plane mean kappa'*p.
    """
    m = params.nakagami_m
    delta = derived.delta
    c = m * _threshold(params, derived) / derived.snr
    y = c * radius ** params.pathloss
    part = (math.gamma(m + delta) / (delta * math.gamma(m))
            * special.gammaincc(m + delta, y)
            - y ** delta * special.gammaincc(m, y) / delta)
    return (params.lambda_bs * p * 2.0 * math.pi
            * c ** (-delta) / params.pathloss * part)


def truncation_radius(params: SystemParams, p_max: float, eps: float) -> float:
    """Smallest radius whose expected missed qualifying-BS count is below eps."""
    if not 0.0 < p_max <= 1.0:
        raise DomainError(f"p_max must be in (0, 1], got {p_max}")
    if eps <= 0:
        raise DomainError("eps must be positive")
    derived = derive(params)
    scale = (derived.snr / _threshold(params, derived)) ** (1.0 / params.pathloss)
    if _tail_mean(params, derived, p_max, 0.0) <= eps:
        # Even the full process misses fewer than eps in expectation; any
        # radius works, use the natural association distance scale.
        return scale
    lo, hi = 0.0, scale
    while _tail_mean(params, derived, p_max, hi) > eps:
        hi *= 2.0
        if hi > RADIUS_CAP:
            raise TruncationError(
                f"required disk radius exceeds the {RADIUS_CAP:.0e} m cap")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _tail_mean(params, derived, p_max, mid) > eps:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-9 * hi:
            break
    return hi


def _resolve_radius(policy: CachingPolicy, params: SystemParams,
                    cfg: TrialConfig) -> float:
    if cfg.disk_radius is not None:
        return cfg.disk_radius
    p_max = float(np.max(policy.probs))
    if p_max <= 0.0:
        return 0.0
    return truncation_radius(params, p_max, cfg.truncation_eps)


def _chunk_rng(seed: int, chunk_index: int) -> np.random.Generator:
    # chunk_index + 1 keeps the spawn key non-negative (index -1 is the task stream)
    return np.random.default_rng(
        np.random.SeedSequence(seed & 0xFFFFFFFFFFFFFFFF, spawn_key=(chunk_index + 1,)))


def _qualified_per_trial(probs: np.ndarray, rng: np.random.Generator,
                         params: SystemParams, derived: DerivedParams,
                         radius: float) -> np.ndarray:
    """One chunk: number of above-threshold BSs for each trial in it."""
    counts = rng.poisson(params.lambda_bs * math.pi * radius * radius * probs)
    total = int(counts.sum())
    if total == 0:
        return np.zeros(len(probs), dtype=int)
    radii = radius * np.sqrt(rng.random(total))
    gains = rng.gamma(params.nakagami_m, 1.0 / params.nakagami_m, total)
    qualified = gains * radii ** (-params.pathloss) >= (
        _threshold(params, derived) / derived.snr)
    trial_of = np.repeat(np.arange(len(probs)), counts)
    return np.bincount(trial_of[qualified], minlength=len(probs))


def _success_flags(cache_probs: np.ndarray, params: SystemParams,
                   derived: DerivedParams, radius: float, seed: int) -> np.ndarray:
    """Per-trial success flags; cache_probs holds one caching probability per trial."""
    flags = np.zeros(len(cache_probs), dtype=bool)
    for chunk_index, start in enumerate(range(0, len(cache_probs), CHUNK)):
        probs = cache_probs[start:start + CHUNK]
        rng = _chunk_rng(seed, chunk_index)
        flags[start:start + CHUNK] = _qualified_per_trial(
            probs, rng, params, derived, radius) > 0
    return flags


def simulate_task_success(f: int, policy: CachingPolicy, pop: Popularity,
                          params: SystemParams, cfg: TrialConfig) -> OutageEstimate:
    """Estimate the probability of completing task f within the deadline."""
    validate_params(params)
    if cfg.trials < 1:
        raise DomainError("need at least one trial")
    p = policy.prob(f)
    if p == 0.0:
        return OutageEstimate(mean=0.0, stderr=0.0, trials=cfg.trials, seed=cfg.seed)
    derived = derive(params)
    radius = _resolve_radius(policy, params, cfg)
    flags = _success_flags(np.full(cfg.trials, p), params, derived, radius, cfg.seed)
    mean = float(flags.sum()) / cfg.trials
    return OutageEstimate(mean=mean,
                          stderr=math.sqrt(mean * (1.0 - mean) / cfg.trials),
                          trials=cfg.trials, seed=cfg.seed)


def simulate_outage(policy: CachingPolicy, pop: Popularity, params: SystemParams,
                    cfg: TrialConfig, stratified: bool = False) -> OutageEstimate:
    """Estimate the overall outage: task drawn from the Zipf pmf, then one
    task-success trial against the thinned BS process.

    Stratified mode allocates trials across tasks proportionally to the pmf
    (largest-remainder rounding) and recombines with the exact pmf weights;
    tasks allocated zero trials are dropped and their mass renormalized away.
    """
    validate_params(params)
    if cfg.trials < 1:
        raise DomainError("need at least one trial")
    if policy.size != pop.size:
        raise DomainError("policy and popularity sizes differ")
    derived = derive(params)
    radius = _resolve_radius(policy, params, cfg)

    if not stratified:
        rng = _chunk_rng(cfg.seed, -1)  # task draws use their own stream
        tasks = rng.choice(pop.size, size=cfg.trials, p=pop.pmf)
        flags = _success_flags(policy.probs[tasks], params, derived, radius, cfg.seed)
        mean = 1.0 - float(flags.sum()) / cfg.trials
        return OutageEstimate(mean=mean,
                              stderr=math.sqrt(mean * (1.0 - mean) / cfg.trials),
                              trials=cfg.trials, seed=cfg.seed)

    ideal = pop.pmf * cfg.trials
    alloc = np.floor(ideal).astype(int)
    remainder = cfg.trials - int(alloc.sum())
    if remainder > 0:
        order = np.argsort(-(ideal - alloc), kind="stable")
        alloc[order[:remainder]] += 1
    live = np.flatnonzero(alloc)
    cache_probs = np.repeat(policy.probs[live], alloc[live])
    flags = _success_flags(cache_probs, params, derived, radius, cfg.seed)
    mean = 0.0
    offset = 0
    for idx in live:
        n = alloc[idx]
        mean += pop.pmf[idx] * (n - int(flags[offset:offset + n].sum())) / n
        offset += n
    mean /= float(pop.pmf[live].sum())
    stderr = math.sqrt(max(mean * (1.0 - mean), 0.0) / cfg.trials)
    return OutageEstimate(mean=mean, stderr=stderr, trials=cfg.trials, seed=cfg.seed)


def qualifying_counts(f: int, policy: CachingPolicy, pop: Popularity,
                      params: SystemParams, cfg: TrialConfig) -> np.ndarray:
    """Per-trial number of BSs caching dataset f whose received power clears
    the threshold; Poisson with mean kappa' * p(f) up to truncation."""
    validate_params(params)
    p = policy.prob(f)
    if p == 0.0:
        return np.zeros(cfg.trials, dtype=int)
    derived = derive(params)
    radius = _resolve_radius(policy, params, cfg)
    out = np.zeros(cfg.trials, dtype=int)
    for chunk_index, start in enumerate(range(0, cfg.trials, CHUNK)):
        k = min(CHUNK, cfg.trials - start)
        rng = _chunk_rng(cfg.seed, chunk_index)
        out[start:start + k] = _qualified_per_trial(
            np.full(k, p), rng, params, derived, radius)
    return out
