"""Backhaul, hierarchical-caching, and co-location variants."""

import math

import numpy as np
import pytest

from edge3c.errors import BudgetInfeasible, InfeasibleLatency, WrongBranch
from edge3c.model import derive, zipf
from edge3c.policy import optimal_policy
from edge3c.analytics import outage
from edge3c.variants import (BackhaulParams, backhaul_only_outage,
                             cache_plus_backhaul_outage,
                             colocated_vs_distributed,
                             hierarchical_approx_upper_bound,
                             hierarchical_optimize,
                             hierarchical_uniform_storage_value, make_backhaul)

from conftest import make_params
from oracles import pg_joint_policy


def test_make_backhaul_recomputes_deadline_constant():
    params = make_params()
    derived = derive(params)
    bh = make_backhaul(params, avail_prob=0.9, latency=0.1, storage=20.0)
    # Less time left on air -> higher rate needed -> smaller constant.
    assert 0 < bh.kappa_b < derived.kappa_prime
    zero = make_backhaul(params, avail_prob=1.0, latency=0.0, storage=0.0)
    assert zero.kappa_b == pytest.approx(derived.kappa_prime)


def test_make_backhaul_errors():
    params = make_params()
    with pytest.raises(ValueError):
        make_backhaul(params, avail_prob=1.2, latency=0.0, storage=0.0)
    with pytest.raises(ValueError):
        make_backhaul(params, avail_prob=1.0, latency=0.6, storage=0.0)
    with pytest.raises(BudgetInfeasible):
        make_backhaul(params, avail_prob=1.0, latency=0.0, storage=1000.0)
    with pytest.raises(InfeasibleLatency):
        # 0.11 s of compute leaves nothing after a 0.4 s backhaul hop.
        make_backhaul(params, avail_prob=1.0, latency=0.4, storage=0.0)


def test_cache_plus_backhaul_factorizes():
    params = make_params()
    derived = derive(params)
    pop = zipf(params.library_size, params.zipf_gamma)
    policy = optimal_policy(pop, derived.kappa_prime, params.cache_size)
    bh = make_backhaul(params, avail_prob=0.8, latency=0.05, storage=0.0)
    combined = cache_plus_backhaul_outage(policy, pop, derived, bh)
    assert combined == pytest.approx(
        backhaul_only_outage(bh) * outage(policy, pop, derived), rel=1e-12)
    assert combined <= backhaul_only_outage(bh) + 1e-15
    assert combined <= outage(policy, pop, derived) + 1e-15


def test_hierarchical_matches_joint_oracle():
    rng = np.random.default_rng(21)
    for _ in range(15):
        gamma = float(rng.uniform(0.2, 1.8))
        kp = float(rng.uniform(1.0, 20.0))
        kb = float(rng.uniform(1.0, 20.0))
        cache_budget = float(rng.uniform(0.5, 11.5))
        storage = float(rng.uniform(0.0, 11.5))
        pop = zipf(12, gamma)
        bh = BackhaulParams(avail_prob=1.0, latency=0.0, storage=storage, kappa_b=kb)
        res = hierarchical_optimize(pop, kp, bh, cache_budget)
        p_ref, q_ref = pg_joint_policy(pop.pmf, kp, kb, cache_budget, storage)
        oracle = float(np.sum(pop.pmf * np.exp(-kp * p_ref - kb * q_ref)))
        assert res.outage <= oracle + 1e-5
        assert res.kkt_residual < 1e-7
        assert float(res.bs_policy.probs.sum()) == pytest.approx(cache_budget, abs=1e-8)
        assert float(res.storage_policy.probs.sum()) == pytest.approx(storage, abs=1e-8)


def test_hierarchical_reduces_to_plain_optimum_without_storage():
    pop = zipf(100, 0.8)
    bh = BackhaulParams(avail_prob=1.0, latency=0.0, storage=0.0, kappa_b=3.0)
    res = hierarchical_optimize(pop, 6.0, bh, 20.0)
    plain = outage(optimal_policy(pop, 6.0, 20.0), pop, 6.0)
    assert res.outage == pytest.approx(plain, rel=1e-10)


def test_hierarchical_improves_on_feasible_baselines():
    pop = zipf(200, 0.7)
    bh = BackhaulParams(avail_prob=1.0, latency=0.0, storage=40.0, kappa_b=2.5)
    res = hierarchical_optimize(pop, 5.0, bh, 30.0)
    plain = outage(optimal_policy(pop, 5.0, 30.0), pop, 5.0)
    uniform_storage = hierarchical_uniform_storage_value(pop, 5.0, bh, 30.0)
    assert res.outage <= plain + 1e-12       # extra storage can only help
    assert res.outage <= uniform_storage + 1e-12


def test_hierarchical_budget_errors():
    pop = zipf(10, 0.8)
    bh = BackhaulParams(avail_prob=1.0, latency=0.0, storage=11.0, kappa_b=2.0)
    with pytest.raises(BudgetInfeasible):
        hierarchical_optimize(pop, 5.0, bh, 5.0)
    ok = BackhaulParams(avail_prob=1.0, latency=0.0, storage=2.0, kappa_b=2.0)
    with pytest.raises(BudgetInfeasible):
        hierarchical_optimize(pop, 5.0, ok, 11.0)


def test_hierarchical_closed_form_is_an_asymptotic_approximation():
    """The exponential-sum closed form tracks the optimum but is not a hard
    bound at finite M; we assert agreement within a factor of two."""
    pop = zipf(2000, 0.6)
    bh = BackhaulParams(avail_prob=1.0, latency=0.0, storage=150.0, kappa_b=20.0)
    res = hierarchical_optimize(pop, 30.0, bh, 100.0)
    approx = hierarchical_approx_upper_bound(0.6, 100.0, 150.0, 2000.0, 30.0, 20.0)
    assert 0.5 <= res.outage / approx <= 2.0


def test_colocation_invariance():
    params = make_params(zipf_gamma=0.6, cache_size=50.0)
    derived = derive(params)
    for scale in (0.25, 1.0, 4.0):
        base, scaled = colocated_vs_distributed(params, derived, scale)
        assert scaled == pytest.approx(base, rel=1e-12)
    heavy = make_params(zipf_gamma=1.5)
    with pytest.raises(WrongBranch):
        colocated_vs_distributed(heavy, derive(heavy), 2.0)
    with pytest.raises(ValueError):
        colocated_vs_distributed(params, derived, 0.0)
