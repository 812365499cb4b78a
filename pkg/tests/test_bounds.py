"""Integral-comparison sandwiches versus brute-force summation."""

import math

import numpy as np
import pytest

from edge3c.errors import DomainError
from edge3c.bounds import (lemma1_logsum_bounds, lemma2_harmonic_bounds,
                           lemma3_zipf_mass_bounds, zipf_mass)
from edge3c.model import partial_sum


def _draw_gamma(rng):
    # Both branches, bounded away from the excluded gamma = 1.
    if rng.random() < 0.5:
        return float(rng.uniform(0.05, 0.95))
    return float(rng.uniform(1.05, 2.5))


def test_logsum_sandwich_randomized():
    rng = np.random.default_rng(101)
    for _ in range(1000):
        a = int(rng.integers(1, 2000))
        b = a + int(rng.integers(1, 5000))
        direct = math.fsum(math.log(f) for f in range(a, b + 1))
        pair = lemma1_logsum_bounds(a, b)
        assert pair.lower <= direct <= pair.upper


def test_harmonic_sandwich_randomized():
    rng = np.random.default_rng(102)
    for _ in range(1000):
        a = int(rng.integers(1, 2000))
        b = a + int(rng.integers(0, 5000))
        gamma = _draw_gamma(rng)
        direct = partial_sum(a, b, gamma)
        pair = lemma2_harmonic_bounds(a, b, gamma)
        assert pair.lower <= direct * (1 + 1e-12)
        assert direct <= pair.upper * (1 + 1e-12)


def test_zipf_mass_sandwich_randomized():
    rng = np.random.default_rng(103)
    for _ in range(1000):
        size = int(rng.integers(10, 20000))
        a = int(rng.integers(1, size))
        b = int(rng.integers(a, size + 1))
        gamma = _draw_gamma(rng)
        direct = zipf_mass(a, b, size, gamma)
        pair = lemma3_zipf_mass_bounds(a, b, size, gamma)
        assert pair.lower <= direct * (1 + 1e-12)
        assert direct <= pair.upper * (1 + 1e-12)


def test_bounds_tighten_as_window_grows():
    """upper/lower ratio approaches 1 along a geometric window sequence."""
    a = 20
    for gamma in (0.5, 1.5):
        ratios = []
        for b in (40, 160, 640, 2560, 10240):
            pair = lemma2_harmonic_bounds(a, b, gamma)
            ratios.append(pair.upper / pair.lower)
        assert all(x > y for x, y in zip(ratios, ratios[1:]))
        # For gamma > 1 the series converges, so the ratio settles at a
        # limit set by the window start rather than reaching 1.
        assert ratios[-1] < 1.03

    ratios = []
    for b in (40, 160, 640, 2560, 10240):
        pair = lemma1_logsum_bounds(a, b)
        ratios.append(pair.upper / pair.lower)
    assert all(x > y for x, y in zip(ratios, ratios[1:]))


def test_domain_errors():
    with pytest.raises(DomainError):
        lemma1_logsum_bounds(5, 5)
    with pytest.raises(DomainError):
        lemma1_logsum_bounds(0, 5)
    with pytest.raises(DomainError):
        lemma2_harmonic_bounds(3, 10, 1.0)
    with pytest.raises(DomainError):
        lemma2_harmonic_bounds(5, 3, 0.5)
    with pytest.raises(DomainError):
        lemma3_zipf_mass_bounds(1, 20, 10, 0.5)
    with pytest.raises(DomainError):
        lemma3_zipf_mass_bounds(1, 5, 10, 1.0)
