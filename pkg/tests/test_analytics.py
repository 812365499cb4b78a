"""Closed-form outage, asymptotic formulas/bounds, and the delay view."""

import math
from dataclasses import replace

import numpy as np
import pytest

from edge3c.errors import DomainError, WrongBranch
from edge3c.model import derive, zipf
from edge3c.policy import (CachingPolicy, most_popular_policy, optimal_policy,
                           regime_breakpoints, regime_report, uniform_policy)
from edge3c.analytics import (OutageBounds, asymptotic_outage_gt1,
                              asymptotic_outage_lt1, corollary101_bounds,
                              effective_snr, min_latency, outage,
                              prop2_most_popular, prop2_uniform,
                              prop3_most_popular_bounds, reference_outage,
                              task_success_prob, thm4_outage, thm5_outage,
                              thm6_outage, thm7_bounds, thm8_bounds,
                              thm9_bounds, thm10_bounds)

from conftest import make_params


def exact_optimal_outage(gamma, kp, budget, size):
    pop = zipf(size, gamma)
    return outage(optimal_policy(pop, kp, budget), pop, kp)


# Frozen heavy-tail bound instances: (gamma, kappa', S at M=1e6, family).
# S scales with M so the regime classification is stable across sizes.
GT1_FAMILIES = [
    (1.5, 15.0, 1000.0, "thm7"), (1.2, 12.0, 2000.0, "thm7"), (2.0, 24.0, 1000.0, "thm7"),
    (1.5, 4.0, 5000.0, "thm8"), (1.2, 3.0, 5000.0, "thm8"), (2.0, 6.0, 5000.0, "thm8"),
    (1.5, 25.0, 1e5, "thm9"), (1.2, 22.0, 2e5, "thm9"), (2.0, 33.0, 1e5, "thm9"),
    (1.5, 3.0, 5e5, "thm10"), (1.2, 3.0, 5e5, "thm10"), (2.0, 4.0, 5e5, "thm10"),
]
FAMILY_REGIME = {"thm7": "I", "thm8": "I", "thm9": "II", "thm10": "III"}


def bounds_for(gamma, kp, budget, size, family):
    report = regime_report(gamma, kp, budget, size)
    assert report.regime == FAMILY_REGIME[family]
    if family == "thm7":
        assert report.m1 < 1.0
        return thm7_bounds(gamma, budget, size, kp, report.c2)
    if family == "thm8":
        assert report.m1 >= 1.0
        return thm8_bounds(gamma, budget, size, kp, report.c1, report.c2)
    if family == "thm9":
        return thm9_bounds(gamma, budget, size, kp)
    return thm10_bounds(gamma, size, kp, report.C1, report.C2)


def test_outage_basics():
    pop = zipf(10, 0.8)
    pol = uniform_policy(10, 5.0)
    assert outage(pol, pop, 3.0) == pytest.approx(math.exp(-1.5), rel=1e-12)
    assert task_success_prob(1, pol, 3.0) == pytest.approx(-math.expm1(-1.5))
    with pytest.raises(DomainError):
        outage(uniform_policy(9, 4.0), pop, 3.0)


def test_gt1_sandwich_across_sizes():
    """Exact optimal outage sits inside every theorem's bound pair.

    gamma = 1.2 converges slowly: at M = 1e4 its exact value still exceeds
    the asymptotic upper bound by a few percent, so it is checked from 1e5 up.
    """
    for gamma, kp, s6, family in GT1_FAMILIES:
        sizes = (10 ** 4, 10 ** 5, 10 ** 6) if gamma != 1.2 else (10 ** 5, 10 ** 6)
        for size in sizes:
            budget = s6 * size / 10 ** 6
            pair = bounds_for(gamma, kp, budget, size, family)
            value = exact_optimal_outage(gamma, kp, budget, size)
            assert pair.lower <= value <= pair.upper, (gamma, kp, size, family)


def test_corollary_101_sandwich_and_large_kappa_form():
    gamma, kp, budget, size = 1.2, 12.0, 2e5, 10 ** 6
    value = exact_optimal_outage(gamma, kp, budget, size)
    full = corollary101_bounds(gamma, budget, size, kp)
    nofloor = corollary101_bounds(gamma, budget, size, kp, drop_floor=True)
    assert full.contains(value)
    assert nofloor.contains(value)
    assert full.lower >= nofloor.lower  # floor terms only add mass


def test_lt1_convergence_toward_asymptote():
    cases = [
        ("II", 0.6, 40.0, 0.1),
        ("I", 0.6, 2.0, 0.1),
        ("III", 0.6, 1.0, 0.5),
    ]
    for want, gamma, kp, ratio in cases:
        gaps = []
        for size in (10 ** 4, 10 ** 5, 10 ** 6):
            budget = ratio * size
            report = regime_report(gamma, kp, budget, size)
            assert report.regime == want
            if want == "I":
                formula = thm4_outage(gamma, budget, size, kp, report.c1, report.c2)
            elif want == "II":
                formula = thm5_outage(gamma, budget, size, kp)
            else:
                formula = thm6_outage(gamma, kp, report.C1, report.C2)
            gaps.append(abs(exact_optimal_outage(gamma, kp, budget, size) / formula - 1))
        assert gaps[0] > gaps[1] > gaps[2]
        assert gaps[-1] < 0.05


def test_lt1_dispatch_and_regime_iii_corollary():
    # Raising the noise floor scales kappa' down to ~1.1, which with
    # S/M = 0.5 lands in the saturated-head / no-zero-tail regime.
    params = make_params(library_size=10 ** 4, cache_size=5000.0, zipf_gamma=0.6,
                         noise_power=1e-5 * (5.653 / 1.1) ** 2)
    derived = derive(params)
    report = regime_breakpoints(params, derived)
    assert report.regime == "III"
    result = asymptotic_outage_lt1(params, derived, report)
    assert result.theorem == "thm6"
    assert result.cor61 is not None and result.cor61_large_kappa is not None
    with pytest.raises(WrongBranch):
        asymptotic_outage_lt1(replace(params, zipf_gamma=1.2), derived, report)


def test_gt1_dispatch_attaches_corollary_in_regime_iii():
    params = make_params(library_size=10 ** 5, cache_size=5e4, zipf_gamma=2.0,
                         noise_power=2e-5)  # kappa' ~ 4, C2 = 0.5 -> regime III
    derived = derive(params)
    report = regime_breakpoints(params, derived)
    assert report.regime == "III"
    pair = asymptotic_outage_gt1(params, derived, report)
    assert pair.approx is not None
    with pytest.raises(WrongBranch):
        asymptotic_outage_gt1(replace(params, zipf_gamma=0.5), derived, report)


def test_outage_monotone_in_budget_and_kappa():
    size = 2000
    pop = zipf(size, 0.7)
    values = [exact_optimal_outage(0.7, 6.0, b, size)
              for b in (50, 100, 200, 400, 800)]
    assert all(a > b for a, b in zip(values, values[1:]))
    values = [exact_optimal_outage(0.7, kp, 200.0, size)
              for kp in (1.0, 2.0, 4.0, 8.0, 16.0)]
    assert all(a > b for a, b in zip(values, values[1:]))


def test_dominance_ordering_lt1():
    """Optimal beats both references everywhere; uniform beats most-popular
    once the per-dataset coverage mass kappa' S / M is at least ~2."""
    size = 10 ** 5
    for ratio in (0.05, 0.2, 0.5):
        for kp in (5.0, 15.0):
            for gamma in (0.3, 0.6, 0.9):
                budget = ratio * size
                pop = zipf(size, gamma)
                opt = outage(optimal_policy(pop, kp, budget), pop, kp)
                uni = outage(uniform_policy(size, budget), pop, kp)
                mp = outage(most_popular_policy(size, budget), pop, kp)
                assert opt <= uni + 1e-12 and opt <= mp + 1e-12
                if kp * ratio >= 2.0:
                    assert uni <= mp + 1e-12


def test_outage_floor_for_random_policies():
    rng = np.random.default_rng(8)
    size = 300
    pop = zipf(size, 0.9)
    for _ in range(200):
        probs = rng.uniform(0, 1, size)
        kp = float(rng.uniform(0.5, 20))
        value = float(np.sum(pop.pmf * np.exp(-kp * probs)))
        assert value >= math.exp(-kp) - 1e-15


def test_bounds_clamping_keeps_raw_values():
    # Small budgets can push the printed lower bound negative.
    pair = OutageBounds.clamped(-0.2, 1.4, "test")
    assert pair.lower == 0.0 and pair.upper == 1.0
    assert pair.raw_lower == -0.2 and pair.raw_upper == 1.4


def test_reference_formulas_match_exact_evaluation():
    size = 10 ** 5
    # Point formulas, light tails: 1% at gamma well below 1.
    for gamma, kp, budget in [(0.3, 8.0, 5000.0), (0.5, 5.0, 10000.0),
                              (0.6, 5.0, 10000.0)]:
        pop = zipf(size, gamma)
        exact_mp = outage(most_popular_policy(size, budget), pop, kp)
        assert prop2_most_popular(gamma, budget, size, kp) == pytest.approx(
            exact_mp, rel=0.01)
        exact_uni = outage(uniform_policy(size, budget), pop, kp)
        assert prop2_uniform(budget, size, kp) == pytest.approx(exact_uni, rel=1e-12)
    # Bound pairs, heavy tails: containment.
    for gamma, kp, budget in [(1.2, 5.0, 10000.0), (1.5, 8.0, 5000.0),
                              (2.0, 12.0, 2000.0)]:
        pop = zipf(size, gamma)
        exact_mp = outage(most_popular_policy(size, budget), pop, kp)
        assert prop3_most_popular_bounds(gamma, budget, size, kp).contains(exact_mp)


def test_reference_outage_dispatch():
    params = make_params(zipf_gamma=0.6)
    derived = derive(params)
    assert isinstance(reference_outage("uniform", params, derived), float)
    assert isinstance(reference_outage("most_popular", params, derived), float)
    heavy = make_params(zipf_gamma=1.5)
    assert isinstance(reference_outage("most_popular", heavy, derive(heavy)),
                      OutageBounds)
    with pytest.raises(DomainError):
        reference_outage("nope", params, derived)
    border = make_params(zipf_gamma=1.0)
    with pytest.raises(WrongBranch):
        reference_outage("most_popular", border, derive(border))


def test_min_latency_round_trip():
    params = make_params(library_size=10 ** 4, cache_size=1000.0, zipf_gamma=0.6)
    derived = derive(params)
    target = 0.05
    point = min_latency(params, derived, target)
    assert point.d_star == pytest.approx(point.comm_delay + point.compute_delay)
    again = derive(make_params(library_size=10 ** 4, cache_size=1000.0,
                               zipf_gamma=0.6, latency=point.d_star))
    back = thm5_outage(0.6, 1000.0, 10 ** 4, again.kappa_prime)
    assert back == pytest.approx(target, rel=1e-9)


def test_effective_snr_domain():
    params = make_params(zipf_gamma=0.6)
    derived = derive(params)
    limit = 0.4 * math.exp(0.6)
    with pytest.raises(DomainError):
        effective_snr(params, derived, limit * 1.01)
    with pytest.raises(DomainError):
        effective_snr(params, derived, 0.0)
    heavy = make_params(zipf_gamma=1.5)
    with pytest.raises(WrongBranch):
        effective_snr(heavy, derive(heavy), 0.1)
