"""Caching policies: exact water-filling optimum, reference policies, regimes.

The optimal randomized policy minimizes sum_f P_r(f) * exp(-kappa' * p(f))
subject to sum_f p(f) = S and 0 <= p(f) <= 1.  Its closed form is

    p*(f) = min(1, max(0, -(1/kappa') * ln(zeta / (kappa' * P_r(f)))))

with the multiplier zeta pinned by the budget.  The per-entry map is
non-increasing in zeta, so the budget is too, and plain bisection finds zeta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BudgetInfeasible, DomainError, NoRoot
from .model import Popularity

__all__ = [
    "CachingPolicy",
    "RegimeReport",
    "optimal_policy",
    "most_popular_policy",
    "uniform_policy",
    "regime_breakpoints",
    "regime_report",
]

BUDGET_RTOL = 1e-12
MAX_BISECTIONS = 200


@dataclass(frozen=True)
class CachingPolicy:
    """Marginal caching probabilities p(f) for f = 1..M, summing to the budget S."""

    probs: np.ndarray
    budget: float

    @property
    def size(self) -> int:
        return len(self.probs)

    def prob(self, f: int) -> float:
        """Caching probability of dataset f (1-based)."""
        if not 1 <= f <= self.size:
            raise DomainError(f"dataset index {f} outside [1, {self.size}]")
        return float(self.probs[f - 1])


@dataclass(frozen=True)
class RegimeReport:
    """Asymptotic breakpoints of the optimal policy and the regime they imply.

    Regimes: "I" has both a saturated head and a zero tail (m2 < M),
    "II" has no saturated head (m1 < 1), "III" has a saturated head and no
    zero tail (m1 >= 1 and m2 >= M).
    """

    regime: str
    m1: float       # c1 * S, last always-cached index
    m2: float       # c2 * S, first never-cached index
    c1: float
    c2: float
    m_star: float   # min(S * kappa' / gamma, M)
    C1: float       # head fraction in regime III, root of C1 - ln C1 = (kappa'/gamma)(1 - C2) + 1
    C2: float       # S / M


def _waterfill(weights: np.ndarray, kappa_prime: float, zeta: float) -> np.ndarray:
    return np.clip(-np.log(zeta / (kappa_prime * weights)) / kappa_prime, 0.0, 1.0)


def optimal_policy(pop: Popularity, kappa_prime: float, budget: float) -> CachingPolicy:
    """Exact optimal policy via bisection on the Lagrange multiplier.

    Works for un-normalized popularity weights too: rescaling the weights
    only rescales zeta, leaving the policy unchanged.
    """
    m = pop.size
    if budget < 0 or budget > m:
        raise BudgetInfeasible(f"budget {budget} outside [0, {m}]")
    if kappa_prime <= 0:
        raise DomainError("kappa_prime must be positive")
    if budget == 0:
        return CachingPolicy(np.zeros(m), 0.0)
    if budget == m:
        return CachingPolicy(np.ones(m), float(m))
    w = np.asarray(pop.pmf, dtype=np.float64)
    if w.max() == w.min():
        # Uniform popularity: the symmetric problem has the uniform optimum
        # and the bisection below is degenerate there.
        return CachingPolicy(np.full(m, budget / m), float(budget))

    zeta_hi = kappa_prime * float(w.max())   # budget(zeta_hi) = 0
    # At zeta <= kappa' * w_min * e^(-kappa') every entry clamps to 1.
    zeta_lo = max(kappa_prime * float(w.min()) * math.exp(-kappa_prime), 1e-300)
    tol = BUDGET_RTOL * max(1.0, budget)
    probs = None
    for _ in range(MAX_BISECTIONS):
        zeta = math.sqrt(zeta_lo * zeta_hi)  # bisect in log space
        probs = _waterfill(w, kappa_prime, zeta)
        total = probs.sum()
        if abs(total - budget) < tol:
            break
        if total > budget:
            zeta_lo = zeta
        else:
            zeta_hi = zeta
    return CachingPolicy(probs, float(budget))


def most_popular_policy(size: int, budget: float) -> CachingPolicy:
    """Cache the head of the library until the budget runs out.

    A fractional budget puts the remainder on the next rank so the total
    stays exactly S.
    """
    if budget < 0 or budget > size:
        raise BudgetInfeasible(f"budget {budget} outside [0, {size}]")
    probs = np.zeros(size)
    whole = int(math.floor(budget))
    probs[:whole] = 1.0
    if whole < size:
        probs[whole] = budget - whole
    return CachingPolicy(probs, float(budget))


def uniform_policy(size: int, budget: float) -> CachingPolicy:
    """Every dataset cached with the same probability S / M."""
    if budget < 0 or budget > size:
        raise BudgetInfeasible(f"budget {budget} outside [0, {size}]")
    return CachingPolicy(np.full(size, budget / size), float(budget))


def _solve_head_fraction(rhs: float) -> float:
    """Root of g(x) = x - ln(x) = rhs on (0, 1]; g is strictly decreasing there."""
    if rhs < 1.0:
        raise NoRoot(f"x - ln(x) >= 1 on (0, 1], no root for rhs={rhs}")
    if rhs == 1.0:
        return 1.0
    # Solve in u = -ln(x): h(u) = u + e^-u is strictly increasing for u > 0,
    # and working in log space avoids underflow when rhs is large (the root
    # x ~ e^-rhs can sit far below the double-precision floor).
    u = rhs
    for _ in range(200):
        e = math.exp(-u)
        step = (u + e - rhs) / (1.0 - e)
        u -= step
        if abs(step) <= 1e-16 * max(u, 1.0):
            break
    return min(max(math.exp(-u), 1e-300), 1.0)


def regime_report(gamma: float, kappa_prime: float, budget: float, size: int) -> RegimeReport:
    """Breakpoints and regime classification from the raw constants."""
    if gamma <= 0:
        raise DomainError("regime breakpoints need gamma > 0")
    if kappa_prime <= 0:
        raise DomainError("regime breakpoints need kappa_prime > 0")
    x = kappa_prime / gamma
    # c2 = x / (1 - e^-x) and c1 = c2 e^-x = x / (e^x - 1); this form stays
    # finite for large x, where e^x alone would overflow.
    c2 = x / -math.expm1(-x)
    c1 = c2 * math.exp(-x)
    m1 = c1 * budget
    m2 = c2 * budget
    m_star = min(budget * x, float(size))
    big_c2 = budget / size
    big_c1 = _solve_head_fraction(x * (1.0 - big_c2) + 1.0)
    if m2 < size:
        regime = "I"
    elif m1 < 1.0:
        regime = "II"
    else:
        regime = "III"
    return RegimeReport(regime=regime, m1=m1, m2=m2, c1=c1, c2=c2,
                        m_star=m_star, C1=big_c1, C2=big_c2)


def regime_breakpoints(params, derived) -> RegimeReport:
    """RegimeReport for a validated SystemParams / DerivedParams pair."""
    return regime_report(params.zipf_gamma, derived.kappa_prime,
                         params.cache_size, params.library_size)
