"""Closed-form outage expressions, asymptotic theorems, and the delay view.

Every formula here is a function of (gamma, S, M, kappa') plus, for the
regime-dependent expressions, the breakpoint constants from the policy
module.  The exact finite-M outage of any policy is a plain weighted sum
of exponentials; the asymptotic expressions describe its large-M limit
under the optimal policy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, WrongBranch
from .model import DerivedParams, Popularity, SystemParams
from .policy import CachingPolicy, RegimeReport

__all__ = [
    "OutageBounds",
    "DelayPoint",
    "AsymptoticOutage",
    "task_success_prob",
    "outage",
    "asymptotic_outage_lt1",
    "asymptotic_outage_gt1",
    "reference_outage",
    "effective_snr",
    "min_latency",
    "thm4_outage",
    "thm5_outage",
    "thm6_outage",
    "corollary61_outage",
    "thm7_bounds",
    "thm8_bounds",
    "thm9_bounds",
    "thm10_bounds",
    "corollary101_bounds",
    "prop2_most_popular",
    "prop2_uniform",
    "prop3_most_popular_bounds",
]


def _kp(derived: DerivedParams | float) -> float:
    return derived.kappa_prime if isinstance(derived, DerivedParams) else float(derived)


@dataclass(frozen=True)
class OutageBounds:
    """A (lower, upper) outage sandwich; raw values kept because the printed
    lower bounds can dip below 0 at small S."""

    lower: float
    upper: float
    source: str
    raw_lower: float = float("nan")
    raw_upper: float = float("nan")
    approx: "OutageBounds | None" = None  # Cor 10.1 companion in regime III

    @staticmethod
    def clamped(lower: float, upper: float, source: str,
                approx: "OutageBounds | None" = None) -> "OutageBounds":
        return OutageBounds(
            lower=min(max(lower, 0.0), 1.0),
            upper=min(max(upper, 0.0), 1.0),
            source=source,
            raw_lower=lower,
            raw_upper=upper,
            approx=approx,
        )

    def contains(self, value: float) -> bool:
        return self.lower <= value <= self.upper


@dataclass(frozen=True)
class DelayPoint:
    """Minimum achievable latency split into its transmission and compute parts."""

    eta_eff: float
    d_star: float
    comm_delay: float
    compute_delay: float
    comm_only_approx: float  # log-log tradeoff form, valid when eta_eff >> 1


@dataclass(frozen=True)
class AsymptoticOutage:
    """Regime-matched asymptotic outage for gamma < 1, plus the regime-III
    simplifications when applicable."""

    value: float
    theorem: str
    cor61: float | None = None
    cor61_large_kappa: float | None = None


def task_success_prob(f: int, policy: CachingPolicy,
                      derived: DerivedParams | float) -> float:
    """Probability of completing task f within the deadline: 1 - e^(-kappa' p(f))."""
    return -math.expm1(-_kp(derived) * policy.prob(f))


def outage(policy: CachingPolicy, pop: Popularity,
           derived: DerivedParams | float) -> float:
    """Exact outage: sum_f P_r(f) * exp(-kappa' * p(f))."""
    if policy.size != pop.size:
        raise DomainError(
            f"policy covers {policy.size} datasets but popularity covers {pop.size}")
    return float(np.sum(pop.pmf * np.exp(-_kp(derived) * policy.probs)))


# --------------------------------------------------------------------------
# gamma < 1 asymptotics
# --------------------------------------------------------------------------

def thm4_outage(gamma: float, budget: float, size: float, kappa_prime: float,
                c1: float, c2: float) -> float:
    """Regime-I asymptote: 1 minus a power law in S/M."""
    bracket = (
        c2 ** (1.0 - gamma)
        - c1 ** (1.0 - gamma) * math.exp(-kappa_prime)
        - (1.0 - gamma) * math.exp(gamma) * (c2 - c1) * c2 ** (-gamma)
        * (c2 / c1) ** (-gamma * c1 / (c2 - c1))
        * math.exp(-(1.0 - c1) * kappa_prime / (c2 - c1))
    )
    return 1.0 - bracket * (budget / size) ** (1.0 - gamma)


def thm5_outage(gamma: float, budget: float, size: float, kappa_prime: float) -> float:
    """Regime-II asymptote: (1-gamma) e^gamma e^(-S kappa'/M)."""
    return (1.0 - gamma) * math.exp(gamma) * math.exp(-budget * kappa_prime / size)


def thm6_outage(gamma: float, kappa_prime: float, c_head: float, c_ratio: float) -> float:
    """Regime-III asymptote with head fraction C1 and cache ratio C2."""
    if c_head == 1.0:
        head_term = 0.0
    else:
        head_term = (
            (1.0 - gamma) * math.exp(gamma) * (1.0 - c_head)
            * c_head ** (gamma * c_head / (1.0 - c_head))
            * math.exp(-kappa_prime * (c_ratio - c_head) / (1.0 - c_head))
        )
    return head_term + math.exp(-kappa_prime) * c_head ** (1.0 - gamma)


def corollary61_outage(gamma: float, budget: float, size: float,
                       kappa_prime: float, c_head: float) -> tuple[float, float]:
    """Small-C2 simplification of the regime-III asymptote and its further
    large-kappa' reduction."""
    base = (1.0 - gamma) * math.exp(gamma) * math.exp(-budget * kappa_prime / size)
    return base + c_head ** (1.0 - gamma) * math.exp(-kappa_prime), base


def asymptotic_outage_lt1(params: SystemParams, derived: DerivedParams,
                          regime: RegimeReport) -> AsymptoticOutage:
    """Dispatch to the regime-matched gamma < 1 asymptotic formula."""
    gamma = params.zipf_gamma
    if gamma >= 1.0:
        raise WrongBranch(f"gamma < 1 asymptotics requested with gamma={gamma}")
    kp = derived.kappa_prime
    s, m = params.cache_size, float(params.library_size)
    if regime.regime == "I":
        return AsymptoticOutage(
            value=thm4_outage(gamma, s, m, kp, regime.c1, regime.c2), theorem="thm4")
    if regime.regime == "II":
        return AsymptoticOutage(value=thm5_outage(gamma, s, m, kp), theorem="thm5")
    cor, cor_large = corollary61_outage(gamma, s, m, kp, regime.C1)
    return AsymptoticOutage(
        value=thm6_outage(gamma, kp, regime.C1, regime.C2), theorem="thm6",
        cor61=cor, cor61_large_kappa=cor_large)


# --------------------------------------------------------------------------
# gamma > 1 bounds
# --------------------------------------------------------------------------

def thm7_bounds(gamma: float, budget: float, size: float,
                kappa_prime: float, c2: float) -> OutageBounds:
    """Regime-I bounds when the head never saturates (m1 < 1)."""
    amp = ((gamma - 1.0) * math.exp(gamma) * c2 ** (1.0 - gamma)
           * math.exp(-kappa_prime / c2) + c2 ** (1.0 - gamma))
    main = amp * budget ** (1.0 - gamma)
    tail = size ** (1.0 - gamma)
    return OutageBounds.clamped((main - tail) / gamma, main - tail, "thm7")


def thm8_bounds(gamma: float, budget: float, size: float,
                kappa_prime: float, c1: float, c2: float) -> OutageBounds:
    """Regime-I bounds when the head saturates (m1 >= 1)."""
    floor = math.exp(-kappa_prime)
    mid = ((gamma - 1.0) * math.exp(gamma) * (c2 - c1) * c2 ** (-gamma)
           * (c2 / c1) ** (-gamma * c1 / (c2 - c1))
           * math.exp(-(1.0 - c1) * kappa_prime / (c2 - c1)))
    tail = size ** (1.0 - gamma)
    s_pow = budget ** (1.0 - gamma)
    lower = (floor - tail
             + (mid + c2 ** (1.0 - gamma)
                - floor * (c1 + 1.0 / budget) ** (1.0 - gamma)) * s_pow) / gamma
    upper = (gamma * floor - tail
             + (mid + c2 ** (1.0 - gamma) - floor * c1 ** (1.0 - gamma)) * s_pow)
    return OutageBounds.clamped(lower, upper, "thm8")


def thm9_bounds(gamma: float, budget: float, size: float,
                kappa_prime: float) -> OutageBounds:
    """Regime-II bounds; upper/lower differ exactly by the factor gamma."""
    upper = ((gamma - 1.0) * math.exp(gamma) * size ** (1.0 - gamma)
             * math.exp(-budget * kappa_prime / size))
    return OutageBounds.clamped(upper / gamma, upper, "thm9")


def thm10_bounds(gamma: float, size: float, kappa_prime: float,
                 c_head: float, c_ratio: float) -> OutageBounds:
    """Regime-III bounds built on the Theorem-3 head fraction C1."""
    floor = math.exp(-kappa_prime)
    if c_head == 1.0:
        shape = 0.0
    else:
        shape = ((gamma - 1.0) * math.exp(gamma) * (1.0 - c_head)
                 * c_head ** (gamma * c_head / (1.0 - c_head))
                 * math.exp(-kappa_prime * (c_ratio - c_head) / (1.0 - c_head))
                 * size ** (1.0 - gamma))
    lower = floor / gamma + shape / gamma
    upper = gamma * floor + shape
    return OutageBounds.clamped(lower, upper, "thm10")


def corollary101_bounds(gamma: float, budget: float, size: float,
                        kappa_prime: float, drop_floor: bool = False) -> OutageBounds:
    """Small-C2 simplification of the regime-III bounds; optionally drop the
    e^(-kappa') floor terms (the large-kappa' form)."""
    core = ((gamma - 1.0) * math.exp(gamma) * size ** (1.0 - gamma)
            * math.exp(-budget * kappa_prime / size))
    if drop_floor:
        return OutageBounds.clamped(core / gamma, core, "cor10.1-large-kappa")
    floor = math.exp(-kappa_prime)
    return OutageBounds.clamped(floor / gamma + core / gamma,
                                gamma * floor + core, "cor10.1")


def asymptotic_outage_gt1(params: SystemParams, derived: DerivedParams,
                          regime: RegimeReport) -> OutageBounds:
    """Dispatch to the regime-matched gamma > 1 bound pair.

    Regime I splits per the head breakpoint: m1 < 1 uses the no-head form,
    m1 >= 1 the saturated-head form.  Regime III results carry the
    Corollary 10.1 simplified pair in .approx.
    """
    gamma = params.zipf_gamma
    if gamma <= 1.0:
        raise WrongBranch(f"gamma > 1 bounds requested with gamma={gamma}")
    kp = derived.kappa_prime
    s, m = params.cache_size, float(params.library_size)
    if regime.regime == "I":
        if regime.m1 < 1.0:
            return thm7_bounds(gamma, s, m, kp, regime.c2)
        return thm8_bounds(gamma, s, m, kp, regime.c1, regime.c2)
    if regime.regime == "II":
        return thm9_bounds(gamma, s, m, kp)
    main = thm10_bounds(gamma, m, kp, regime.C1, regime.C2)
    return OutageBounds(
        lower=main.lower, upper=main.upper, source=main.source,
        raw_lower=main.raw_lower, raw_upper=main.raw_upper,
        approx=corollary101_bounds(gamma, s, m, kp))


# --------------------------------------------------------------------------
# Reference policies
# --------------------------------------------------------------------------

def prop2_most_popular(gamma: float, budget: float, size: float,
                       kappa_prime: float) -> float:
    """Most-popular policy outage for gamma < 1: power-law reduction only."""
    return 1.0 - (-math.expm1(-kappa_prime)) * (budget / size) ** (1.0 - gamma)


def prop2_uniform(budget: float, size: float, kappa_prime: float) -> float:
    """Uniform-random policy outage, exact for every gamma: e^(-kappa' S / M)."""
    return math.exp(-kappa_prime * budget / size)


def prop3_most_popular_bounds(gamma: float, budget: float, size: float,
                              kappa_prime: float) -> OutageBounds:
    """Most-popular policy outage sandwich for gamma > 1."""
    floor = math.exp(-kappa_prime)
    head = (budget + 1.0) ** (1.0 - gamma)
    s_pow = budget ** (1.0 - gamma)
    tail = (size + 1.0) ** (1.0 - gamma)
    lower = (1.0 - head) * floor / gamma + (s_pow - tail) / gamma
    upper = (gamma - head) * floor + s_pow - tail
    return OutageBounds.clamped(lower, upper, "prop3")


def reference_outage(kind: str, params: SystemParams,
                     derived: DerivedParams) -> float | OutageBounds:
    """Asymptotic outage of a reference policy on the matching gamma branch."""
    gamma = params.zipf_gamma
    kp = derived.kappa_prime
    s, m = params.cache_size, float(params.library_size)
    if kind == "uniform":
        return prop2_uniform(s, m, kp)
    if kind != "most_popular":
        raise DomainError(f"unknown reference policy {kind!r}")
    if gamma == 1.0:
        raise WrongBranch("reference formulas are stated for gamma != 1")
    if gamma < 1.0:
        return prop2_most_popular(gamma, s, m, kp)
    return prop3_most_popular_bounds(gamma, s, m, kp)


# --------------------------------------------------------------------------
# Delay-side reformulation
# --------------------------------------------------------------------------

def effective_snr(params: SystemParams, derived: DerivedParams,
                  target_outage: float) -> float:
    """Effective SNR delivering the target outage through the caching gain."""
    gamma = params.zipf_gamma
    if gamma >= 1.0:
        raise WrongBranch("the effective-SNR reformulation is stated for gamma < 1")
    prefactor = (1.0 - gamma) * math.exp(gamma)
    if not 0.0 < target_outage < prefactor:
        raise DomainError(
            f"target outage must lie in (0, {prefactor}), got {target_outage}")
    half_alpha = params.pathloss / 2.0
    log_term = math.log(prefactor / target_outage)
    return (derived.snr * (derived.kappa * params.cache_size) ** half_alpha
            / (params.library_size * log_term) ** half_alpha)


def min_latency(params: SystemParams, derived: DerivedParams,
                target_outage: float) -> DelayPoint:
    """Minimum deadline achieving the target outage, split comm + compute."""
    eta_eff = effective_snr(params, derived, target_outage)
    comm = params.total_bits / (params.bandwidth * math.log2(1.0 + eta_eff))
    comp = params.compute_delay
    approx = (params.total_bits / (params.bandwidth * math.log2(eta_eff))
              if eta_eff > 1.0 else float("nan"))
    return DelayPoint(eta_eff=eta_eff, d_star=comm + comp,
                      comm_delay=comm, compute_delay=comp,
                      comm_only_approx=approx)
