"""Network variants: guaranteed backhaul, cache + backhaul, hierarchical
caching with jointly optimized policies, and the co-located vs distributed
comparison.

The hierarchical objective sum_f P_r(f) e^(-kappa' p(f)) e^(-kappa_B q(f))
is jointly convex over the two budgeted boxes, so block-coordinate descent
with the exact single-policy water-filling per block converges to the
global optimum; a joint KKT residual check is the authoritative stopping
certificate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .analytics import outage, thm5_outage
from .errors import BudgetInfeasible, InfeasibleLatency, WrongBranch
from .model import DerivedParams, Popularity, SystemParams, derive, validate_params
from .policy import CachingPolicy, optimal_policy

__all__ = [
    "BackhaulParams",
    "HierarchicalResult",
    "make_backhaul",
    "backhaul_only_outage",
    "cache_plus_backhaul_outage",
    "hierarchical_optimize",
    "hierarchical_uniform_storage_value",
    "hierarchical_approx_upper_bound",
    "colocated_vs_distributed",
]

MAX_SWEEPS = 500
SWEEP_TOL = 1e-10
KKT_TOL = 1e-7


@dataclass(frozen=True)
class BackhaulParams:
    """Dedicated-backhaul configuration attached to every BS."""

    avail_prob: float   # P_Ba in [0, 1]
    latency: float      # d_B, seconds, 0 <= d_B < D
    storage: float      # S_B, external storage budget, 0 <= S_B <= M
    kappa_b: float      # kappa' recomputed with deadline D - d_B


@dataclass(frozen=True)
class HierarchicalResult:
    bs_policy: CachingPolicy
    storage_policy: CachingPolicy
    outage: float
    sweeps: int
    kkt_residual: float


def make_backhaul(params: SystemParams, avail_prob: float, latency: float,
                  storage: float) -> BackhaulParams:
    """Build BackhaulParams, recomputing the deadline constant at D - d_B."""
    if not 0.0 <= avail_prob <= 1.0:
        raise ValueError(f"backhaul availability must be in [0,1], got {avail_prob}")
    if not 0.0 <= latency < params.latency:
        raise ValueError(
            f"backhaul latency must lie in [0, D={params.latency}), got {latency}")
    if not 0.0 <= storage <= params.library_size:
        raise BudgetInfeasible(
            f"backhaul storage {storage} outside [0, {params.library_size}]")
    shifted = replace(params, latency=params.latency - latency)
    if shifted.latency - shifted.compute_delay <= 0:
        raise InfeasibleLatency(
            "compute delay plus backhaul latency exceeds the deadline")
    kappa_b = derive(validate_params(shifted)).kappa_prime
    return BackhaulParams(avail_prob=avail_prob, latency=latency,
                          storage=storage, kappa_b=kappa_b)


def backhaul_only_outage(bh: BackhaulParams) -> float:
    """Outage with backhaul retrieval only: e^(-P_Ba * kappa_B)."""
    return math.exp(-bh.avail_prob * bh.kappa_b)


def cache_plus_backhaul_outage(policy: CachingPolicy, pop: Popularity,
                               derived: DerivedParams | float,
                               bh: BackhaulParams) -> float:
    """Outage when a cache miss falls back to any backhaul-equipped BS.

    The backhaul latency is task-independent, so the outage factorizes into
    the backhaul-only term times the plain caching outage.
    """
    return backhaul_only_outage(bh) * outage(policy, pop, derived)


def _hier_objective(pmf: np.ndarray, kp: float, kb: float,
                    p: np.ndarray, q: np.ndarray) -> float:
    return float(np.sum(pmf * np.exp(-kp * p) * np.exp(-kb * q)))


def _kkt_residual(weights: np.ndarray, coef: float, probs: np.ndarray) -> float:
    """Stationarity residual of one block: the marginal w*coef*e^(-coef p)
    must be a constant mu on the interior, >= mu where p = 1, <= mu where p = 0."""
    marg = weights * coef * np.exp(-coef * probs)
    interior = (probs > 1e-12) & (probs < 1.0 - 1e-12)
    if interior.any():
        mu = float(marg[interior].mean())
    else:
        ones = probs >= 1.0 - 1e-12
        mu = float(marg[ones].min()) if ones.any() else float(marg.max())
    scale = max(mu, 1e-300)
    res = 0.0
    if interior.any():
        res = float(np.abs(marg[interior] - mu).max()) / scale
    ones = probs >= 1.0 - 1e-12
    zeros = probs <= 1e-12
    if ones.any():
        res = max(res, float((mu - marg[ones]).max()) / scale)
    if zeros.any():
        res = max(res, float((marg[zeros] - mu).max()) / scale)
    return res


def hierarchical_optimize(pop: Popularity, derived: DerivedParams | float,
                          bh: BackhaulParams,
                          cache_budget: float) -> HierarchicalResult:
    """Jointly optimize the BS cache (budget cache_budget against kappa')
    and the external-storage cache (budget bh.storage against kappa_B).

    Alternates exact water-filling on each policy with the other held fixed,
    folding the fixed policy into the popularity weights.
    """
    kp = derived.kappa_prime if isinstance(derived, DerivedParams) else float(derived)
    kb = bh.kappa_b
    m = pop.size
    if not 0 <= bh.storage <= m:
        raise BudgetInfeasible(f"storage budget {bh.storage} outside [0, {m}]")
    if not 0 <= cache_budget <= m:
        raise BudgetInfeasible(f"cache budget {cache_budget} outside [0, {m}]")
    pmf = np.asarray(pop.pmf)
    q = np.full(m, bh.storage / m)
    p = np.zeros(m)
    obj = math.inf
    sweeps = 0
    for sweeps in range(1, MAX_SWEEPS + 1):
        eff_p = Popularity(size=m, gamma=pop.gamma, pmf=pmf * np.exp(-kb * q), norm=1.0)
        p = optimal_policy(eff_p, kp, cache_budget).probs
        eff_q = Popularity(size=m, gamma=pop.gamma, pmf=pmf * np.exp(-kp * p), norm=1.0)
        q = optimal_policy(eff_q, kb, bh.storage).probs
        new_obj = _hier_objective(pmf, kp, kb, p, q)
        if obj - new_obj < SWEEP_TOL:
            obj = new_obj
            break
        obj = new_obj
    res = max(_kkt_residual(pmf * np.exp(-kb * q), kp, p),
              _kkt_residual(pmf * np.exp(-kp * p), kb, q))
    return HierarchicalResult(
        bs_policy=CachingPolicy(p, float(p.sum())),
        storage_policy=CachingPolicy(q, float(q.sum())),
        outage=obj, sweeps=sweeps, kkt_residual=res)


def hierarchical_uniform_storage_value(pop: Popularity,
                                       derived: DerivedParams | float,
                                       bh: BackhaulParams,
                                       cache_budget: float) -> float:
    """Outage with uniform external storage and the exactly optimal BS cache.

    A feasible point of the joint problem, hence an upper bound on its
    optimum.
    """
    kp = derived.kappa_prime if isinstance(derived, DerivedParams) else float(derived)
    bs = optimal_policy(pop, kp, cache_budget)
    return math.exp(-bh.kappa_b * bh.storage / pop.size) * outage(bs, pop, kp)


def hierarchical_approx_upper_bound(gamma: float, cache_budget: float,
                                    storage_budget: float, size: float,
                                    kappa_prime: float, kappa_b: float) -> float:
    """Asymptotic (regime-II style) upper bound on the hierarchical optimum:
    (1-gamma) e^gamma exp(-(kappa' S + kappa_B S_B)/M).  Approximate."""
    return ((1.0 - gamma) * math.exp(gamma)
            * math.exp(-(kappa_prime * cache_budget + kappa_b * storage_budget) / size))


def colocated_vs_distributed(params: SystemParams, derived: DerivedParams,
                             scale: float) -> tuple[float, float]:
    """Regime-II asymptotic outage at (lambda, S) vs (c*lambda, S/c).

    The formula depends on (lambda, S) only through S*kappa'/M with
    kappa' proportional to lambda, so the two values agree exactly for
    any c > 0 keeping S/c <= M.
    """
    if params.zipf_gamma >= 1.0:
        raise WrongBranch("the co-location comparison uses the gamma < 1 asymptote")
    if scale <= 0:
        raise ValueError("scale must be positive")
    base = thm5_outage(params.zipf_gamma, params.cache_size,
                       params.library_size, derived.kappa_prime)
    scaled_params = replace(params, lambda_bs=params.lambda_bs * scale,
                            cache_size=params.cache_size / scale)
    scaled = derive(validate_params(scaled_params))
    other = thm5_outage(scaled_params.zipf_gamma, scaled_params.cache_size,
                        scaled_params.library_size, scaled.kappa_prime)
    return base, other
