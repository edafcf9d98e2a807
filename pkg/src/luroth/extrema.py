"""Uniqueness-of-maximum probabilities for Luroth digits.

rho_k is the probability that the maximum of k IID Luroth digits is attained
by exactly one index.  The per-level contribution at maximum value m has the
closed form k*(m-1)^(k-1)/(m^k*(m+1)); summing over m gives a series route,
and a partial-fraction expansion of the level terms turns the sum into a
finite combination of integer zeta values, which is the exact route.

The exact route is numerically delicate: the bracket it evaluates is ~1/k
while its individual terms are ~2^(k-1), so about k bits cancel.  All
accumulation here is exact rational arithmetic on dyadic-quantized zeta
values whose certified bounds are propagated through, so the only error in
the result is the explicitly tracked one.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Tuple

import numpy as np

from .precision import (
    HighPrecisionReal,
    PrecisionError,
    _quantize,
    _zeta_dyadic,
    bernoulli_triangle,
)

__all__ = [
    "PartialFractionExpansion",
    "RhoEstimate",
    "coeff_c",
    "corollary_sequence",
    "partial_fraction_expansion",
    "q_k",
    "q_k_via_partial_fraction",
    "rho_exact",
    "rho_km",
    "rho_series",
    "rho_sum_over_k",
]

_K_CEILING = 200  # precision demands grow ~linearly in k beyond desk scale
_SERIES_TERM_BUDGET = 10**9


@dataclass(frozen=True)
class RhoEstimate:
    """rho_k estimate tagged with how it was produced."""

    k: int
    value: HighPrecisionReal
    method: str  # exact-formula | series | monte-carlo

    @property
    def error_bound(self) -> Fraction:
        return self.value.error_bound

    def __post_init__(self):
        if self.method not in ("exact-formula", "series", "monte-carlo"):
            raise ValueError("unknown method %r" % self.method)
        if not 0 < self.value.value <= 1 + self.value.error_bound:
            raise ValueError("rho estimate outside (0, 1] by more than its bound")


@dataclass(frozen=True)
class PartialFractionExpansion:
    """Coefficients of the level-term expansion for a given k.

    telescope_coefficient multiplies (1/m - 1/(m+1)); power_coefficients[j]
    multiplies 1/m^j for j = 2..k.
    """

    k: int
    telescope_coefficient: int
    power_coefficients: Dict[int, int]

    def __post_init__(self):
        if self.telescope_coefficient != 2 ** (self.k - 1):
            raise ValueError("telescope coefficient must be 2^(k-1)")


def coeff_c(j: int, k: int) -> int:
    """Expansion coefficient: (-1)^(j+1) * T(k-1, k-j) for j <= k, 0 at j = k+1."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if j < 1 or j > k + 1:
        raise ValueError("j must lie in [1, k+1]")
    if j == k + 1:
        return 0
    t = bernoulli_triangle(k - 1, k - j)
    return t if j % 2 == 1 else -t


def partial_fraction_expansion(k: int) -> PartialFractionExpansion:
    if k < 1:
        raise ValueError("k must be >= 1")
    return PartialFractionExpansion(
        k, 2 ** (k - 1), {j: coeff_c(j, k) for j in range(2, k + 1)}
    )


def q_k(m: int, k: int) -> Fraction:
    """Level term (m-1)^(k-1) / (m^k (m+1)), exact; zero at m = 1 for k >= 2."""
    if m < 1 or k < 1:
        raise ValueError("need m >= 1 and k >= 1")
    return Fraction((m - 1) ** (k - 1), m**k * (m + 1))


def q_k_via_partial_fraction(m: int, k: int) -> Fraction:
    """Same level term evaluated through the partial-fraction expansion."""
    if m < 1 or k < 1:
        raise ValueError("need m >= 1 and k >= 1")
    acc = 2 ** (k - 1) * (Fraction(1, m) - Fraction(1, m + 1))
    for j in range(2, k + 1):
        acc += Fraction(coeff_c(j, k), m**j)
    return acc


def rho_km(k: int, m: int) -> Fraction:
    """Probability the maximum of k digits equals m and is attained once."""
    if m < 1 or k < 1:
        raise ValueError("need m >= 1 and k >= 1")
    return k * q_k(m, k)


def rho_sum_over_k(m: int, k_top: int) -> Fraction:
    """Sum of rho_km over k = 1..k_top; converges to m/(m+1) geometrically.

    Not a probability (the events overlap across k); the limit identity
    p_m / tau_m^2 = m/(m+1) is what the tests pin down.
    """
    if m < 1 or k_top < 1:
        raise ValueError("need m >= 1 and k_top >= 1")
    if m == 1:
        return Fraction(1, 2)  # only k = 1 contributes
    # sum k*r^(k-1) * p where r = (m-1)/m, p = 1/(m(m+1)); exact rationals
    r = Fraction(m - 1, m)
    p = Fraction(1, m * (m + 1))
    acc = Fraction(0)
    rpow = Fraction(1)
    for k in range(1, k_top + 1):
        acc += k * rpow
        rpow *= r
    return acc * p


def rho_exact(k: int, target: int = 128) -> RhoEstimate:
    """rho_k through the zeta-value formula, certified to 2**-target.

    Works at target + k + 64 bits internally so that the ~k bits destroyed
    by cancellation still leave the requested accuracy; the returned bound
    is propagated from the certified zeta bounds, not assumed.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > _K_CEILING:
        raise ValueError("k above the practical ceiling %d" % _K_CEILING)
    if target < 8:
        raise ValueError("target must be >= 8 bits")
    if k == 1:
        return RhoEstimate(1, HighPrecisionReal(Fraction(1), Fraction(0), target), "exact-formula")
    zbits = target + k + 64
    acc = Fraction(0)
    errsum = Fraction(0)
    # smallest coefficients first (j descending), then the power of two
    for j in range(k, 1, -1):
        t = bernoulli_triangle(k - 1, k - j)
        zval, zbound = _zeta_dyadic(j, zbits)
        acc += (zval if j % 2 == 1 else -zval) * t
        errsum += t * zbound
    acc += 2 ** (k - 1)
    value = k * acc
    err = k * errsum
    value_q = _quantize(value, target + 16)
    err += Fraction(1, 2 ** (target + 17))
    if err > Fraction(1, 2**target):
        raise PrecisionError("rho_exact could not certify 2^-%d at k=%d" % (target, k))
    return RhoEstimate(k, HighPrecisionReal(value_q, err, target), "exact-formula")


def rho_series(k: int, tol: float = 1e-6) -> RhoEstimate:
    """rho_k by direct summation of the level terms up to M = ceil(k/tol).

    The truncation error is the analytic tail bound k/(M+1) <= tol, recorded
    in the error bound together with a float-rounding allowance; never an
    extrapolation.  Summation is chunked with a fixed shape so the result is
    deterministic.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if not tol > 0:
        raise ValueError("tol must be positive")
    m_top = math.ceil(k / tol)
    if m_top > _SERIES_TERM_BUDGET:
        raise ValueError(
            "tol=%g needs %d terms, above the 1e9 budget" % (tol, m_top)
        )
    chunk = 1 << 20
    partials = []
    for start in range(1, m_top + 1, chunk):
        stop = min(start + chunk, m_top + 1)
        m = np.arange(start, stop, dtype=np.float64)
        term = (1.0 - 1.0 / m) ** (k - 1) / (m * (m + 1.0))
        partials.append(float(term.sum()))
    value = k * math.fsum(partials)
    tail_bound = k / (m_top + 1.0)
    bound = Fraction(tail_bound) + Fraction(abs(value)) * Fraction(1, 2**45)
    return RhoEstimate(
        k, HighPrecisionReal(Fraction(value), bound, 53), "series"
    )


def corollary_sequence(k_max: int, target: int = 128) -> List[Tuple[int, RhoEstimate]]:
    """Table of rho_exact(k) for k = 2..k_max (the sequence behind fig1)."""
    if k_max < 2:
        raise ValueError("k_max must be >= 2")
    return [(k, rho_exact(k, target)) for k in range(2, k_max + 1)]
