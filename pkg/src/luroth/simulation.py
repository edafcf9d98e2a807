"""Reproducible Monte Carlo for Luroth digit statistics.

Trials are partitioned into fixed-size blocks; block b always draws from
stream index b of the seed's Philox family and partial results are reduced
in block order.  The partition depends only on (seed, samples, k), never on
the worker count, so estimates are bit-identical whether run serially or on
a thread pool.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Sequence, Tuple

import numpy as np

from .rng import RngStream

__all__ = [
    "McResult",
    "mc_max_scaled_cdf",
    "mc_rho",
    "mc_stable_centering",
    "mc_trimmed_trajectory",
]

_RHO_BLOCK = 1 << 15
_MATRIX_DRAW_BUDGET = 1 << 22  # per-block draw count for matrix-shaped trials
_TRAJ_CHUNK = 1 << 19


@dataclass(frozen=True)
class McResult:
    estimate: float
    standard_error: float
    samples: int
    seed: int


def _run_blocks(n_blocks: int, fn: Callable[[int], object], workers: int) -> List[object]:
    """Evaluate fn(0..n_blocks-1), returning results in block order."""
    if workers <= 1 or n_blocks <= 1:
        return [fn(b) for b in range(n_blocks)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(n_blocks)))


def _exact_sum_u64(a: np.ndarray) -> int:
    # split 32/32 so each half-sum stays inside int64 for any chunk <= 2^20
    hi = int(np.sum((a >> np.uint64(32)).astype(np.int64)))
    lo = int(np.sum((a & np.uint64(0xFFFFFFFF)).astype(np.int64)))
    return (hi << 32) + lo


def _blocked(samples: int, block: int) -> List[Tuple[int, int]]:
    return [(b, min(block, samples - b * block)) for b in range((samples + block - 1) // block)]


def mc_rho(k: int, samples: int, seed: int = 0, workers: int = 1) -> McResult:
    """Fraction of trials whose maximum digit among k draws is unique.

    Uniqueness is tracked by multiplicity of the running maximum, not index
    scanning: a strictly larger digit resets the count to one, a tie
    increments it.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if samples < 100:
        raise ValueError("samples must be >= 100")
    plan = _blocked(samples, _RHO_BLOCK)

    def one_block(b: int) -> int:
        _, n = plan[b]
        stream = RngStream(seed, b)
        maxd = np.zeros(n, dtype=np.uint64)
        count = np.zeros(n, dtype=np.int64)
        for _ in range(k):
            d = stream.luroth_digits(n)
            greater = d > maxd
            equal = d == maxd
            count = np.where(greater, 1, count + equal)
            np.maximum(maxd, d, out=maxd)
        return int((count == 1).sum())

    successes = sum(_run_blocks(len(plan), one_block, workers))
    p = successes / samples
    se = math.sqrt(p * (1.0 - p) / samples)
    return McResult(p, se, samples, seed)


def mc_max_scaled_cdf(k: int, c: float, samples: int, seed: int = 0, workers: int = 1) -> McResult:
    """Estimate of P(max of k digits < c*k), i.e. the scaled-maximum CDF.

    The event max/k < c is max <= ceil(c*k) - 1 on integers, so the estimate
    targets the exact finite-k value (1 - 1/ceil(c*k))^k.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if not c > 0:
        raise ValueError("c must be positive")
    if samples < 100:
        raise ValueError("samples must be >= 100")
    threshold = math.ceil(c * k) - 1
    block = max(1, _MATRIX_DRAW_BUDGET // k)
    plan = _blocked(samples, block)
    thr = np.uint64(max(threshold, 0))

    def one_block(b: int) -> int:
        _, n = plan[b]
        stream = RngStream(seed, b)
        d = stream.luroth_digits(n * k).reshape(n, k)
        if threshold < 1:
            return 0
        return int((d.max(axis=1) <= thr).sum())

    successes = sum(_run_blocks(len(plan), one_block, workers))
    p = successes / samples
    se = math.sqrt(p * (1.0 - p) / samples)
    return McResult(p, se, samples, seed)


def mc_trimmed_trajectory(
    k_max: int, checkpoints: Sequence[int], seed: int = 0, stream_index: int = 0
) -> List[Tuple[int, float]]:
    """One digit path X_1..X_kmax; reports (S_k - M_k)/(k log k) at checkpoints.

    The running sum and maximum are kept as exact Python integers (unbounded,
    so no overflow for any digit magnitude or path length); the statistic is
    formed in floating point only at each checkpoint.  Natural logarithm.
    """
    if k_max < 2:
        raise ValueError("k_max must be >= 2")
    cps = list(checkpoints)
    if not cps:
        raise ValueError("need at least one checkpoint")
    if cps != sorted(set(cps)):
        raise ValueError("checkpoints must be strictly increasing")
    if cps[0] < 2 or cps[-1] > k_max:
        raise ValueError("checkpoints must lie in [2, k_max]")
    stream = RngStream(seed, stream_index)
    total = 0
    biggest = 0
    pos = 0
    out = []
    for cp in cps:
        need = cp - pos
        while need > 0:
            n = min(need, _TRAJ_CHUNK)
            d = stream.luroth_digits(n)
            total += _exact_sum_u64(d)
            biggest = max(biggest, int(d.max()))
            need -= n
        pos = cp
        out.append((cp, float(total - biggest) / (cp * math.log(cp))))
    return out


def mc_stable_centering(k: int, samples: int, seed: int = 0, workers: int = 1) -> McResult:
    """Empirical median of (S_k - k log k)/k over independent trials.

    A sanity statistic for the order-1 stable (Cauchy-type) limit of the
    untrimmed sums: only boundedness of the median is meaningful, the limit
    has no mean, and the reported standard error (sample std / sqrt(n), per
    the result contract) is a dispersion diagnostic rather than a consistent
    error estimate for a heavy-tailed sample.
    """
    if k < 100:
        raise ValueError("k must be >= 100")
    if samples < 100:
        raise ValueError("samples must be >= 100")
    block = max(1, _MATRIX_DRAW_BUDGET // k)
    plan = _blocked(samples, block)
    center = k * math.log(k)

    def one_block(b: int) -> np.ndarray:
        _, n = plan[b]
        stream = RngStream(seed, b)
        d = stream.luroth_digits(n * k).reshape(n, k)
        sums = d.astype(np.float64).sum(axis=1)
        return (sums - center) / k

    stats = np.concatenate(_run_blocks(len(plan), one_block, workers))
    est = float(np.median(stats))
    se = float(np.std(stats, ddof=1) / math.sqrt(samples))
    return McResult(est, se, samples, seed)
