"""Deterministic ingredients of the trimmed-sum convergence analysis.

A(x) = x*log(x) and its inverse B(x) = x/W(x) (Lambert W), the partial sums
of the convergence-criterion series

    J2(N) = sum_{n=2}^{N} (1/n^2) * (n^2/W(n)^2 - (n-1)^2/W(n-1)^2),

and the centering constants c_k = (k/A(k)) * E(X | X < A(k)) for the Luroth
digit law, whose conditional mean is a harmonic partial sum.

The J2 terms need Lambert W at every integer up to N; consecutive arguments
move the root by O(1/n), so each evaluation warm-starts from the previous
one and is certified by a single fixed-point Newton step (falling back to
the full solver whenever the a priori bound does not close).
"""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .precision import _lambert_w_warm, lambert_w0

__all__ = [
    "EULER_GAMMA",
    "J2PartialSum",
    "a_of",
    "b_of",
    "c_k",
    "harmonic",
    "j2_partial",
    "j2_partial_sums",
    "w_asymptotic_gap",
]

EULER_GAMMA = 0.5772156649015328606

_W_BITS = 64  # certification target for every W evaluation in the series
_B2_SHIFT = 64  # extra fixed-point bits carried by the squared-ratio terms
_HARMONIC_DIRECT_LIMIT = 10**8


@dataclass(frozen=True)
class J2PartialSum:
    n: int
    value: float
    last_term: float

    def __post_init__(self):
        if self.last_term < 0:
            raise ValueError("series terms are nonnegative")


def a_of(x: float) -> float:
    """A(x) = x*log(x) for x > 1 (natural log)."""
    if not x > 1:
        raise ValueError("a_of requires x > 1")
    return x * math.log(x)


def b_of(x: float) -> float:
    """B(x) = x/W(x), the inverse of A on (1, inf); defined for x > 0."""
    if not x > 0:
        raise ValueError("b_of requires x > 0")
    return x / float(lambert_w0(x, _W_BITS))


def w_asymptotic_gap(x: float) -> float:
    """W(x) - (log x - log log x), the remainder of the two-term asymptotic."""
    if not x >= math.e**2:
        raise ValueError("gap is probed for x >= e^2")
    lx = math.log(x)
    return float(lambert_w0(x, _W_BITS)) - (lx - math.log(lx))


def harmonic(n: int) -> float:
    """Harmonic number H_n; direct chunked summation up to 1e8, the
    Euler-Mascheroni expansion beyond (error < 1e-33 relative there)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > _HARMONIC_DIRECT_LIMIT:
        return math.log(n) + EULER_GAMMA + 1.0 / (2 * n) - 1.0 / (12 * n * n)
    parts = []
    chunk = 1 << 22
    for start in range(1, n + 1, chunk):
        a = np.arange(start, min(start + chunk, n + 1), dtype=np.float64)
        parts.append(float(np.sum(1.0 / a)))
    return math.fsum(parts)


def c_k(k: int) -> float:
    """Centering constant (k/A(k)) * E(X | X < A(k)) for the digit law.

    E(X * 1{X < A}) = H_C - 1 with C = ceil(A(k)) (strict cutoff on
    integers: n <= C - 1), and P(X < A) = 1 - 1/C.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    a = a_of(float(k))
    c = math.ceil(a)
    conditional = (harmonic(c) - 1.0) / (1.0 - 1.0 / c)
    return (k / a) * conditional


def _w_scaled_sequence(n_max: int, scale_out: int):
    """Yields (n, w_int) with w_int = W(n) * 2**scale_out certified to 2**-64.

    Warm-started along consecutive n; every value is either certified by the
    single-step Newton bound or recomputed by the full solver.
    """
    seed = float(lambert_w0(2, _W_BITS))
    for n in range(2, n_max + 1):
        got = _lambert_w_warm(n, seed, _W_BITS)
        if got is None:
            full = lambert_w0(n, _W_BITS)
            seed = float(full)
            w_int = round(full.value * (1 << scale_out))
        else:
            w1_int, scale, seed = got
            if scale >= scale_out:
                w_int = w1_int >> (scale - scale_out)
            else:
                w_int = w1_int << (scale_out - scale)
        yield n, w_int


def j2_partial_sums(n_max: int) -> Tuple[np.ndarray, np.ndarray]:
    """Partial sums and terms of the series for N = 2..n_max.

    Returns (values, terms), both of length n_max - 1, where values[i] is
    the partial sum through N = i + 2.  Terms are formed from fixed-point
    integer squared ratios n^2/W(n)^2, so adjacent-term differences do not
    lose mass to rounding before the final float conversion.
    """
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    scale = _W_BITS + 32
    shift = _B2_SHIFT + 2 * scale
    w1 = lambert_w0(1, _W_BITS)
    prev_b2 = (1 << shift) // round(w1.value * (1 << scale)) ** 2
    terms = np.empty(n_max - 1, dtype=np.float64)
    denom_unit = float(1 << _B2_SHIFT)
    for n, w_int in _w_scaled_sequence(n_max, scale):
        b2 = (n * n << shift) // (w_int * w_int)
        terms[n - 2] = (b2 - prev_b2) / (n * n * denom_unit)
        prev_b2 = b2
    return np.cumsum(terms), terms


def j2_partial(n: int) -> J2PartialSum:
    """The series partial sum through N = n, with its last term."""
    values, terms = j2_partial_sums(n)
    return J2PartialSum(n, float(values[-1]), float(terms[-1]))
