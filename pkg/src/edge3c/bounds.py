"""Executable integral-comparison bounds used as oracles for the asymptotics.

Three sandwiches: log-factorial partial sums, generalized harmonic partial
sums, and Zipf mass over an index window.  Each returns the printed pair
and defensively asserts lower <= upper on every call.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .model import partial_sum

__all__ = [
    "BoundPair",
    "lemma1_logsum_bounds",
    "lemma2_harmonic_bounds",
    "lemma3_zipf_mass_bounds",
]


@dataclass(frozen=True)
class BoundPair:
    lower: float
    upper: float

    def __post_init__(self):
        if self.lower > self.upper:
            raise DomainError(
                f"bound pair inverted: lower={self.lower} > upper={self.upper}")

    def contains(self, value: float) -> bool:
        return self.lower <= value <= self.upper


def lemma1_logsum_bounds(a: int, b: int) -> BoundPair:
    """Riemann-sum sandwich of sum_{f=a}^{b} ln(f), for 0 < a < b."""
    if not 0 < a < b:
        raise DomainError(f"need 0 < a < b, got a={a}, b={b}")
    upper = (b + 1) * math.log(b + 1) - (b + 1) - a * math.log(a) + a
    lower = math.log(a) + b * math.log(b) - b - a * math.log(a) + a
    return BoundPair(lower=lower, upper=upper)


def lemma2_harmonic_bounds(a: int, b: int, gamma: float) -> BoundPair:
    """Sandwich of H(a, b, gamma) = sum f^-gamma, valid for gamma != 1."""
    if gamma == 1.0:
        raise DomainError("harmonic bounds require gamma != 1")
    if not 1 <= a <= b:
        raise DomainError(f"need 1 <= a <= b, got a={a}, b={b}")
    one_m_g = 1.0 - gamma
    lower = ((b + 1) ** one_m_g - a ** one_m_g) / one_m_g
    upper = (b ** one_m_g - a ** one_m_g) / one_m_g + a ** (-gamma)
    return BoundPair(lower=lower, upper=upper)


def lemma3_zipf_mass_bounds(a: int, b: int, size: int, gamma: float) -> BoundPair:
    """Sandwich of the Zipf mass sum_{f=a}^{b} P_r(f) over an M-item library."""
    if gamma == 1.0:
        raise DomainError("Zipf mass bounds require gamma != 1")
    if not 1 <= a <= b <= size:
        raise DomainError(f"need 1 <= a <= b <= M, got a={a}, b={b}, M={size}")
    one_m_g = 1.0 - gamma
    lower = ((b + 1) ** one_m_g - a ** one_m_g) / (size ** one_m_g - gamma)
    upper = ((b ** one_m_g - a ** one_m_g + one_m_g * a ** (-gamma))
             / ((size + 1) ** one_m_g - 1.0))
    return BoundPair(lower=lower, upper=upper)


def zipf_mass(a: int, b: int, size: int, gamma: float) -> float:
    """Directly summed Zipf mass, the quantity lemma3 sandwiches."""
    return partial_sum(a, b, gamma) / partial_sum(1, size, gamma)
