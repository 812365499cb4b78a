"""Core system model: physical/task parameters, derived constants, Zipf popularity.

All quantities are plain SI units: watts, hertz, seconds, bits, cycles.
Rates are spectral efficiencies in bits/s/Hz (log base 2); the policy math
elsewhere uses natural logs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InfeasibleLatency

__all__ = [
    "SystemParams",
    "DerivedParams",
    "Popularity",
    "validate_params",
    "derive",
    "zipf",
    "partial_sum",
]


@dataclass(frozen=True)
class SystemParams:
    """Immutable network / task / library configuration.

    cache_size is real-valued on purpose: fractional budgets arise naturally
    from the asymptotic breakpoints and the randomized policy handles them.
    """

    lambda_bs: float        # BS density, BS per unit area (> 0)
    tx_power: float         # transmit power P, watts (> 0)
    noise_power: float      # noise power sigma_n^2, watts (> 0)
    pathloss: float         # pathloss exponent alpha (> 2)
    nakagami_m: float       # Nakagami fading shape m_D (>= 0.5)
    bandwidth: float        # per-user bandwidth B, Hz (> 0)
    compute_rate: float     # per-user compute rate E_c, cycles/s (> 0)
    upload_bits: float      # task upload size F_U, bits (>= 0)
    download_bits: float    # task download size F_D, bits (>= 0)
    compute_scale_up: float    # nu_U, cycles per uploaded bit (>= 0)
    compute_scale_down: float  # nu_D, cycles per downloaded bit (>= 0)
    latency: float          # latency requirement D, seconds (> 0)
    library_size: int       # number of datasets M (>= 1)
    cache_size: float       # per-BS cache budget S, 0 <= S <= M
    zipf_gamma: float       # Zipf exponent gamma (>= 0)

    @property
    def compute_delay(self) -> float:
        """Deterministic compute time of one task, seconds."""
        return (self.compute_scale_up * self.upload_bits
                + self.compute_scale_down * self.download_bits) / self.compute_rate

    @property
    def total_bits(self) -> float:
        return self.upload_bits + self.download_bits


@dataclass(frozen=True)
class DerivedParams:
    """Constants computed once from a validated SystemParams."""

    delta: float          # 2 / alpha
    snr: float            # eta = P / sigma_n^2
    kappa: float          # pi * lambda * Gamma(delta + m) / (m^delta * Gamma(m))
    required_rate: float  # rho, bits/s/Hz needed to meet the deadline
    kappa_prime: float    # kappa * (eta / (2^rho - 1))^delta
    kappa_t: float        # S * kappa_prime / M


@dataclass(frozen=True)
class Popularity:
    """Zipf request distribution over the M-dataset library."""

    size: int
    gamma: float
    pmf: np.ndarray
    norm: float  # H(1, M, gamma)


def validate_params(raw: SystemParams) -> SystemParams:
    """Check every invariant of SystemParams; return it unchanged when valid."""
    if raw.lambda_bs <= 0:
        raise DomainError("BS density must be positive")
    if raw.tx_power <= 0 or raw.noise_power <= 0:
        raise DomainError("tx_power and noise_power must be positive")
    if raw.pathloss <= 2:
        raise DomainError(f"pathloss exponent must exceed 2, got {raw.pathloss}")
    if raw.nakagami_m < 0.5:
        raise DomainError(f"Nakagami shape must be >= 0.5, got {raw.nakagami_m}")
    if raw.bandwidth <= 0 or raw.compute_rate <= 0:
        raise DomainError("bandwidth and compute_rate must be positive")
    if raw.upload_bits < 0 or raw.download_bits < 0:
        raise DomainError("bit counts must be non-negative")
    if raw.upload_bits + raw.download_bits <= 0:
        raise DomainError("a task must move at least one bit")
    if raw.compute_scale_up < 0 or raw.compute_scale_down < 0:
        raise DomainError("compute scaling factors must be non-negative")
    if raw.latency <= 0:
        raise DomainError("latency requirement must be positive")
    if raw.library_size < 1:
        raise DomainError("library must hold at least one dataset")
    if not 0 <= raw.cache_size <= raw.library_size:
        raise DomainError(
            f"cache size must lie in [0, {raw.library_size}], got {raw.cache_size}")
    if raw.zipf_gamma < 0:
        raise DomainError("Zipf exponent must be non-negative")
    if raw.latency - raw.compute_delay <= 0:
        raise InfeasibleLatency(
            f"deadline {raw.latency}s does not cover the compute delay "
            f"{raw.compute_delay}s; the task can never complete")
    return raw


def derive(params: SystemParams) -> DerivedParams:
    """Compute all derived constants from validated parameters."""
    delta = 2.0 / params.pathloss
    snr = params.tx_power / params.noise_power
    m = params.nakagami_m
    kappa = math.pi * params.lambda_bs * math.gamma(delta + m) / (m ** delta * math.gamma(m))
    rho = (params.total_bits / (params.latency - params.compute_delay)) / params.bandwidth
    kappa_prime = kappa * (snr / (2.0 ** rho - 1.0)) ** delta
    kappa_t = params.cache_size * kappa_prime / params.library_size
    return DerivedParams(
        delta=delta,
        snr=snr,
        kappa=kappa,
        required_rate=rho,
        kappa_prime=kappa_prime,
        kappa_t=kappa_t,
    )


def partial_sum(a: int, b: int, gamma: float) -> float:
    """H(a, b, gamma) = sum of f^-gamma for f in [a, b], by direct accumulation.

    Uses exact compensated (fsum) accumulation of chunk totals so that very
    long ranges (b - a > 1e6) stay accurate.
    """
    if not 1 <= a <= b:
        raise DomainError(f"need 1 <= a <= b, got a={a}, b={b}")
    chunk = 1 << 20
    totals = []
    lo = a
    while lo <= b:
        hi = min(lo + chunk - 1, b)
        f = np.arange(lo, hi + 1, dtype=np.float64)
        totals.append(math.fsum(f ** (-gamma)))
        lo = hi + 1
    return math.fsum(totals)


def zipf(size: int, gamma: float) -> Popularity:
    """Zipf popularity: pmf(f) proportional to f^-gamma, normalized over [1, M]."""
    if size < 1:
        raise DomainError("library size must be >= 1")
    if gamma < 0:
        raise DomainError("Zipf exponent must be non-negative")
    ranks = np.arange(1, size + 1, dtype=np.float64)
    weights = ranks ** (-gamma)
    norm = partial_sum(1, size, gamma)
    return Popularity(size=size, gamma=gamma, pmf=weights / norm, norm=norm)
