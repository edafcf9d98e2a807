"""Exact and error-bounded numeric kernels.

Arbitrary-size integer and rational arithmetic (binomial coefficients, partial
binomial-row sums, Bernoulli numbers) plus two certified real-valued kernels:
Riemann zeta at integer arguments via Euler-Maclaurin summation with an exact
rational remainder bound, and the principal branch of Lambert W via a float
seed refined by Newton steps in fixed-point integer arithmetic.

Real results are carried as ``HighPrecisionReal``: an exact rational payload
(usually dyadic) together with a conservative absolute error bound.  Because
the payload is exact, downstream arithmetic on these values adds no rounding
of its own; only the explicitly tracked bounds matter.
"""

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple, Union

Real = Union[int, float, Fraction]

__all__ = [
    "HighPrecisionReal",
    "PrecisionError",
    "bernoulli_number",
    "bernoulli_triangle",
    "binomial",
    "lambert_w0",
    "zeta_int",
]


class PrecisionError(ArithmeticError):
    """Raised when a requested error bound cannot be certified."""


def _to_fraction(x: Real) -> Fraction:
    """Convert exactly; floats are taken at their exact binary value."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError("non-finite value: %r" % x)
        return Fraction(x)
    raise TypeError("expected int, float or Fraction, got %s" % type(x).__name__)


def _quantize(x: Fraction, bits: int) -> Fraction:
    # nearest point on the dyadic grid 2**-bits; off by at most 2**-(bits+1)
    return Fraction(round(x * (1 << bits)), 1 << bits)


@dataclass(frozen=True)
class HighPrecisionReal:
    """A real number as an exact stored value plus an absolute error bound.

    ``value`` is the exact rational payload, ``error_bound`` a certified bound
    on ``|value - true|`` (zero means the value is exact), ``precision_bits``
    the resolution the value was requested at (0 for exact quantities).
    Arithmetic combines payloads exactly and propagates bounds conservatively.
    """

    value: Fraction
    error_bound: Fraction
    precision_bits: int = 0

    def __post_init__(self):
        if self.error_bound < 0:
            raise ValueError("error_bound must be nonnegative")

    def __float__(self) -> float:
        return float(self.value)

    @staticmethod
    def _coerce(other):
        if isinstance(other, HighPrecisionReal):
            return other
        if isinstance(other, (int, Fraction)):
            return HighPrecisionReal(Fraction(other), Fraction(0), 0)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return HighPrecisionReal(
            self.value + o.value,
            self.error_bound + o.error_bound,
            min(self.precision_bits, o.precision_bits),
        )

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return HighPrecisionReal(
            self.value - o.value,
            self.error_bound + o.error_bound,
            min(self.precision_bits, o.precision_bits),
        )

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o.__sub__(self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        bound = (
            abs(self.value) * o.error_bound
            + abs(o.value) * self.error_bound
            + self.error_bound * o.error_bound
        )
        return HighPrecisionReal(
            self.value * o.value, bound, min(self.precision_bits, o.precision_bits)
        )

    __rmul__ = __mul__


def binomial(n: int, k: int) -> int:
    """Binomial coefficient C(n, k), exact; zero when k > n."""
    if n < 0 or k < 0:
        raise ValueError("binomial requires n >= 0 and k >= 0")
    if k > n:
        return 0
    return math.comb(n, k)


def bernoulli_triangle(l: int, j: int) -> int:
    """Partial row sum of binomial coefficients: sum of C(l, i) for i <= j.

    Exact integer result; rejects j outside [0, l].
    """
    if l < 0:
        raise ValueError("row index must be nonnegative")
    if j < 0 or j > l:
        raise ValueError("column index %d outside row of length %d" % (j, l))
    acc = 0
    c = 1
    for i in range(j + 1):
        acc += c
        c = c * (l - i) // (i + 1)
    return acc


# Bernoulli numbers B_m (B_1 = -1/2 convention), grown on demand under a lock
# so the zeta kernel stays thread-safe.
_BERNOULLI = [Fraction(1), Fraction(-1, 2)]
_BERNOULLI_LOCK = threading.Lock()


def bernoulli_number(m: int) -> Fraction:
    """Bernoulli number B_m as an exact rational."""
    if m < 0:
        raise ValueError("index must be nonnegative")
    with _BERNOULLI_LOCK:
        while len(_BERNOULLI) <= m:
            n = len(_BERNOULLI)
            if n % 2 == 1:
                _BERNOULLI.append(Fraction(0))
                continue
            acc = Fraction(0)
            for j, bj in enumerate(_BERNOULLI):
                if bj:
                    acc += math.comb(n + 1, j) * bj
            _BERNOULLI.append(-acc / (n + 1))
        return _BERNOULLI[m]


def _zeta_em_remainder(j: int, n: int, q: int) -> Fraction:
    # magnitude of the first omitted Euler-Maclaurin term, which bounds the
    # truncation error for real exponents >= 2
    b = abs(bernoulli_number(2 * q + 2))
    rising = 1
    for t in range(2 * q + 1):
        rising *= j + t
    return b * rising / (math.factorial(2 * q + 2) * Fraction(n) ** (j + 2 * q + 1))


def _zeta_em_params(j: int, bits: int) -> Tuple[int, int]:
    """Choose cutoff N and correction order q so the remainder is below 2**-bits."""
    q = max(1, bits // 6 + 2)
    target = Fraction(1, 1 << bits)
    n = max(2, (2 * q) // 5)
    while _zeta_em_remainder(j, n, q) > target:
        n *= 2
        if n > (1 << 26):
            raise PrecisionError("zeta parameter search diverged")
    while n > 2:
        cand = max(2, (3 * n) // 4)
        if cand < n and _zeta_em_remainder(j, cand, q) <= target:
            n = cand
        else:
            break
    return n, q


def _zeta_fraction(j: int, bits: int) -> Tuple[Fraction, Fraction]:
    """Exact-rational zeta(j) approximation with certified error <= 2**-bits."""
    n, q = _zeta_em_params(j, bits)
    s = Fraction(0)
    for m in range(1, n + 1):
        s += Fraction(1, m**j)
    s += Fraction(1, (j - 1) * n ** (j - 1))
    s -= Fraction(1, 2 * n**j)
    rising = j  # (j)_{2i-1} maintained incrementally
    for i in range(1, q + 1):
        s += bernoulli_number(2 * i) * rising / (
            math.factorial(2 * i) * Fraction(n) ** (j + 2 * i - 1)
        )
        rising *= (j + 2 * i - 1) * (j + 2 * i)
    return s, _zeta_em_remainder(j, n, q)


_ZETA_CACHE = {}
_ZETA_LOCK = threading.Lock()


def _zeta_dyadic(j: int, bits: int) -> Tuple[Fraction, Fraction]:
    """Dyadic zeta(j) approximation with certified error <= 2**-bits.

    Results are cached per 64-bit accuracy bucket, so sweeps over many k reuse
    one evaluation per argument.
    """
    bucket = ((bits + 63) // 64) * 64
    key = (j, bucket)
    with _ZETA_LOCK:
        hit = _ZETA_CACHE.get(key)
    if hit is None:
        frac, bound = _zeta_fraction(j, bucket + 8)
        val = _quantize(frac, bucket + 9)
        hit = (val, bound + Fraction(1, 1 << (bucket + 10)))
        with _ZETA_LOCK:
            _ZETA_CACHE[key] = hit
    return hit


def zeta_int(j: int, precision_bits: int = 128) -> HighPrecisionReal:
    """Riemann zeta at an integer argument j >= 2 with |error| <= 2**-precision_bits.

    Euler-Maclaurin summation carried out entirely in exact rationals; the
    returned bound is the exact first-omitted-term remainder plus the final
    quantization step, so it is certified rather than heuristic.
    """
    if not isinstance(j, int) or isinstance(j, bool):
        raise TypeError("argument must be an integer")
    if j < 2:
        raise ValueError("argument must be >= 2")
    if precision_bits < 16:
        raise ValueError("precision_bits must be >= 16")
    val, bound = _zeta_dyadic(j, precision_bits)
    return HighPrecisionReal(val, bound, precision_bits)


def _exp_fixed(w: Fraction, scale_bits: int) -> Tuple[int, int]:
    """Fixed-point exp: returns (e, err_ulps) with |e*2**-s - exp(w)| <= err_ulps*2**-s.

    Argument halving until the Taylor argument is below 1/64, then squaring
    back up.  The ulp bound is conservative interval accounting (validated
    against a high-precision oracle in the test suite), not exact rounding
    analysis.  Requires w >= 0.
    """
    if w < 0:
        raise ValueError("argument must be nonnegative")
    if w == 0:
        return 1 << scale_bits, 0
    wf = float(w)
    t = 0
    while wf / (1 << t) > 0.015625:
        t += 1
    s2 = scale_bits + t + 18
    one = 1 << s2
    h = (w.numerator << s2) // (w.denominator << t)
    acc = one
    term = one
    i = 1
    while term:
        term = (term * h) // (one * i)
        acc += term
        i += 1
    e = acc
    for _ in range(t):
        e = (e * e) >> s2
    e_final = e >> (s2 - scale_bits)
    # relative error <= 2**t * (3i+8) ulps at scale s2; 4x safety margin
    rel_num = (3 * i + 8) << t
    err_ulps = 4 * ((e_final * rel_num) // (1 << s2) + 3)
    return e_final, err_ulps


def _lambert_float_seed(x: float) -> float:
    # Halley iteration from a crude start; good to nearly full float precision
    if x > math.e:
        w = math.log(x)
        w -= math.log(w)
    elif x > 0.25:
        w = 0.5
    else:
        w = x * (1.0 - x)
    for _ in range(64):
        ew = math.exp(w)
        f = w * ew - x
        wp1 = w + 1.0
        dw = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1))
        w -= dw
        if abs(dw) <= 1e-13 * (abs(w) + 1e-3):
            break
    return max(w, 0.0)


def lambert_w0(x: Real, precision_bits: int = 64) -> HighPrecisionReal:
    """Principal-branch Lambert W on [0, inf) with a certified residual.

    The returned value w satisfies |w*exp(w) - x| <= 2**-precision_bits * max(1, x),
    checked explicitly in exact arithmetic before returning; ``error_bound``
    additionally bounds |w - W(x)| through a lower bound on the derivative of
    w*exp(w) (which is >= 1 on the nonnegative axis).
    """
    if precision_bits < 4:
        raise ValueError("precision_bits must be >= 4")
    xq = _to_fraction(x)
    if xq < 0:
        raise ValueError("argument must be nonnegative")
    if xq == 0:
        return HighPrecisionReal(Fraction(0), Fraction(0), precision_bits)
    target = max(Fraction(1), xq) / (1 << precision_bits)
    scale = precision_bits + 48
    w = Fraction(round(_lambert_float_seed(float(xq)) * (1 << scale)), 1 << scale)
    for attempt in range(40):
        e_int, err_ulps = _exp_fixed(w, scale)
        e_val = Fraction(e_int, 1 << scale)
        e_err = Fraction(err_ulps, 1 << scale)
        resid_hi = abs(w * e_val - xq) + w * e_err
        if resid_hi <= target:
            deriv_lo = (e_val - e_err) * (1 + w)
            if deriv_lo < 1:
                deriv_lo = Fraction(1)  # true derivative >= 1 for w >= 0
            return HighPrecisionReal(w, resid_hi / deriv_lo, precision_bits)
        w = w - (w * e_val - xq) / (e_val * (1 + w))
        if w < 0:
            w = Fraction(0)
        w = Fraction(round(w * (1 << scale)), 1 << scale)
        if attempt % 5 == 4:
            scale += precision_bits // 2 + 32
    raise PrecisionError("Lambert W refinement did not certify at x=%r" % (x,))


def _lambert_w_warm(x: int, seed: float, precision_bits: int = 64):
    """Certified W(x) for integer x from a nearly-converged float seed.

    One fixed-point Newton step; the residual after the step is bounded a
    priori from the first (and only) fixed-point exponential via the standard
    Newton contraction estimate, all in integer arithmetic.  Returns
    (w_scaled, scale_bits, refreshed_float_seed) or None when the a priori
    bound fails to meet the target, in which case the caller should fall back
    to ``lambert_w0``.  Used by the tail-sum series where millions of
    consecutive evaluations share slowly-moving seeds.
    """
    scale = precision_bits + 32
    one = 1 << scale
    w = seed
    for _ in range(2):  # Halley polish, converges from the previous argument
        ew = math.exp(w)
        f = w * ew - x
        wp1 = w + 1.0
        w -= f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1))
    if not (w > 0 and math.isfinite(w)):
        return None
    w_int = round(w * one)
    e_int, err_ulps = _exp_fixed(Fraction(w_int, one), scale)
    two_s = 2 * scale
    resid = w_int * e_int - (x << two_s)
    resid_hi = abs(resid) + w_int * err_ulps
    deriv_lo = (e_int - err_ulps) * (one + w_int)
    if deriv_lo <= 0:
        return None
    target = max(1, x) << (two_s - precision_bits)
    d0 = (resid_hi << scale) // deriv_lo + 1
    if d0 >= one // 16:
        return None
    w1_int = w_int - (resid * one) // (e_int * (one + w_int))
    # Newton contraction: |w1 - W| <= g''_hi * d0^2 / (2 g'(w)_lo) plus the
    # inexact-denominator and requantization slack; residual <= g'_hi * that.
    # e^(2*d0) <= e^(1/8) < 8/7 inflates the derivative bounds over the
    # uncertainty interval.
    e_hi = e_int + err_ulps
    gpp_hi = ((2 * one + w_int + (one >> 3)) * e_hi // one + 1) * 8 // 7 + 1
    gp_hi = ((one + w_int + (one >> 3)) * e_hi // one + 1) * 8 // 7 + 1
    denom_sq = deriv_lo * deriv_lo // one + 1
    delta1 = (
        (gpp_hi * d0 * d0) // (2 * deriv_lo)
        + (resid_hi * err_ulps * (one + w_int)) // denom_sq
        + 2
    )
    resid1_hi = gp_hi * delta1 + 4 * one
    if resid1_hi > target:
        return None
    return w1_int, scale, w
