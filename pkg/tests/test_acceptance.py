"""Release acceptance checks.

One test per numbered criterion.  Every test prints a single verdict line
`[criterion NN] PASS/FAIL - detail` before asserting, and enforces its
runtime budget.  Tolerances are the released contract, not tuned to the
implementation; reference values come from independent oracles (mpmath for
zeta and the W residual, closed forms elsewhere), never from the code under
test.
"""

import csv
import math
import time
from fractions import Fraction
from pathlib import Path

import mpmath
import numpy as np

from luroth.cli import main as cli_main
from luroth.contfrac import mc_cf_rho
from luroth.expansion import max_cdf_exact
from luroth.extrema import (
    q_k,
    q_k_via_partial_fraction,
    rho_exact,
    rho_series,
    rho_sum_over_k,
)
from luroth.precision import lambert_w0
from luroth.simulation import mc_max_scaled_cdf, mc_rho, mc_trimmed_trajectory
from luroth.trimming import c_k, j2_partial_sums


def _verdict(num: int, ok: bool, detail: str):
    print(f"[criterion {num:02d}] {'PASS' if ok else 'FAIL'} - {detail}")


def test_criterion_01_partial_fraction_identity():
    t0 = time.perf_counter()
    mismatches = [
        (m, k)
        for m in range(1, 41)
        for k in range(1, 26)
        if q_k_via_partial_fraction(m, k) != q_k(m, k)
    ]
    dt = time.perf_counter() - t0
    ok = not mismatches and dt < 10.0
    _verdict(1, ok, f"40x25 exact identities, {len(mismatches)} mismatches, {dt:.2f}s")
    assert mismatches == []
    assert dt < 10.0


def test_criterion_02_base_values():
    t0 = time.perf_counter()
    one = rho_exact(1)
    r2 = rho_exact(2, 128)
    with mpmath.workprec(320):
        oracle = 4 - 2 * mpmath.zeta(2)
        got = mpmath.mpf(r2.value.value.numerator) / r2.value.value.denominator
        diff = abs(got - oracle)
        within = diff <= mpmath.mpf(2) ** -100
        diff_txt = mpmath.nstr(diff, 3)
    dt = time.perf_counter() - t0
    exact_one = one.value.value == 1 and one.error_bound == 0
    ok = exact_one and within and dt < 1.0
    _verdict(2, ok, f"rho(1) exact={exact_one}, |rho(2)-(4-2*zeta(2))|={diff_txt}, {dt:.2f}s")
    assert exact_one
    assert within
    assert dt < 1.0


def test_criterion_03_cross_oracle_agreement():
    t0 = time.perf_counter()
    tol = 1e-6 + 2.0**-64
    worst = 0.0
    for k in (1, 2, 3, 5, 10, 20, 40):
        exact = float(rho_exact(k).value.value)
        series = float(rho_series(k, 1e-6).value.value)
        worst = max(worst, abs(exact - series))
    dt = time.perf_counter() - t0
    ok = worst <= tol and dt < 300.0
    _verdict(3, ok, f"max |exact-series| = {worst:.3g} (tol {tol:.3g}), {dt:.1f}s")
    assert worst <= tol
    assert dt < 300.0


def test_criterion_04_approach_to_one():
    t0 = time.perf_counter()
    gap2 = 1.0 - float(rho_exact(2).value.value)
    gap40 = 1.0 - float(rho_exact(40).value.value)
    dt = time.perf_counter() - t0
    ok = gap40 < gap2 and gap40 < 0.1 and dt < 10.0
    _verdict(4, ok, f"1-rho: k=2 {gap2:.4f} -> k=40 {gap40:.4f} (< 0.1), {dt:.2f}s")
    assert gap40 < gap2
    assert gap40 < 0.1
    assert dt < 10.0


def test_criterion_05_sum_over_k_identity():
    t0 = time.perf_counter()
    worst = 0.0
    for m in (2, 3, 5, 10):
        got = rho_sum_over_k(m, 400)
        worst = max(worst, abs(float(got - Fraction(m, m + 1))))
    dt = time.perf_counter() - t0
    ok = worst <= 1e-12 and dt < 1.0
    _verdict(5, ok, f"max |sum_k - m/(m+1)| = {worst:.3g} (tol 1e-12), {dt:.2f}s")
    assert worst <= 1e-12
    assert dt < 1.0


def test_criterion_06_monte_carlo_consistency():
    t0 = time.perf_counter()
    worst_dev = 0.0
    for k in (2, 10, 40):
        r = mc_rho(k, 10**6, seed=0)
        target = float(rho_exact(k).value.value)
        worst_dev = max(worst_dev, abs(r.estimate - target) / r.standard_error)
    m = mc_max_scaled_cdf(1000, 1.0, 10**6, seed=0)
    limit_target = (1000.0 / 1001.0) ** 1000
    max_dev = abs(m.estimate - limit_target) / m.standard_error
    dt = time.perf_counter() - t0
    ok = worst_dev <= 4.0 and max_dev <= 4.0 and dt < 120.0
    _verdict(6, ok, f"rho dev <= {worst_dev:.2f} SE, maxdist dev {max_dev:.2f} SE (gate 4), {dt:.1f}s")
    assert worst_dev <= 4.0
    assert max_dev <= 4.0
    assert dt < 120.0


def test_criterion_07_trimmed_sum_centering():
    # The medians of (S_k - M_k)/(k log k) over seeds 0..31 settle near 0.96,
    # not near the c_k centering constant (1.159 at k = 1e6): the criterion's
    # target conflates the trimmed-sum median with the truncated-mean
    # normalizer.  The implementation is the faithful statistic; this check
    # records the criterion as stated and fails honestly.
    t0 = time.perf_counter()
    checkpoints = [10**3, 10**6]
    at3, at6 = [], []
    for seed in range(32):
        traj = dict(mc_trimmed_trajectory(10**6, checkpoints, seed=seed))
        at3.append(traj[10**3])
        at6.append(traj[10**6])
    med3 = float(np.median(at3))
    med6 = float(np.median(at6))
    target = c_k(10**6)
    gap = abs(med6 - target)
    closer = abs(med6 - 1.0) < abs(med3 - 1.0)
    dt = time.perf_counter() - t0
    ok = gap <= 0.1 and closer and dt < 180.0
    _verdict(
        7, ok,
        f"median(1e6)={med6:.4f} vs c_k={target:.4f} (gap {gap:.4f}, allowed 0.1); "
        f"median(1e3)={med3:.4f}, closer-to-1={closer}; {dt:.1f}s",
    )
    assert gap <= 0.1
    assert closer
    assert dt < 180.0


def test_criterion_08_w_ratio_series_ingredients():
    t0 = time.perf_counter()
    sums, terms = j2_partial_sums(10**6)
    monotone = bool(np.all(terms >= 0.0))
    v6 = float(sums[-1])
    v5 = float(sums[10**5 - 2])
    worst_resid = 0.0
    with mpmath.workprec(300):
        for x in np.logspace(-3.0, 9.0, 50):
            xf = Fraction(float(x))
            w = lambert_w0(xf, 64)
            wv = mpmath.mpf(w.value.numerator) / w.value.denominator
            xv = mpmath.mpf(xf.numerator) / xf.denominator
            resid = abs(wv * mpmath.exp(wv) - xv)
            worst_resid = max(worst_resid, float(resid / max(1.0, float(x))))
    dt = time.perf_counter() - t0
    ok = (monotone and v6 < 4.0 and (v6 - v5) < 0.2
          and worst_resid <= 2.0**-52 and dt < 60.0)
    _verdict(
        8, ok,
        f"monotone={monotone}, value(1e6)={v6:.4f} (<4), step={v6 - v5:.4f} (<0.2), "
        f"W resid <= {worst_resid:.3g} (tol 2^-52), {dt:.1f}s",
    )
    assert monotone
    assert v6 < 4.0
    assert (v6 - v5) < 0.2
    assert worst_resid <= 2.0**-52
    assert dt < 60.0


def test_criterion_09_figure_tables(tmp_path: Path):
    t0 = time.perf_counter()
    dir_a = tmp_path / "a"
    dir_b = tmp_path / "b"
    assert cli_main(["figures", "--out", str(dir_a)]) == 0
    assert cli_main(["figures", "--out", str(dir_b)]) == 0
    identical = all(
        (dir_a / name).read_bytes() == (dir_b / name).read_bytes()
        for name in ("fig1.csv", "fig2.csv")
    )
    fig1 = list(csv.reader((dir_a / "fig1.csv").open()))[1:]
    fig2 = list(csv.reader((dir_a / "fig2.csv").open()))[1:]
    v1 = [float(r[2]) for r in fig1]
    v2 = [float(r[1]) for r in fig2]
    fig1_ok = (len(fig1) == 39 and all(0.70 < v < 1.0 for v in v1)
               and all(b >= a - 1e-9 for a, b in zip(v1, v1[1:])))
    fig2_ok = (len(fig2) == 998 and all(b > a for a, b in zip(v2, v2[1:]))
               and abs(v2[0] - 0.598) <= 1e-3)
    dt = time.perf_counter() - t0
    ok = identical and fig1_ok and fig2_ok and dt < 30.0
    _verdict(
        9, ok,
        f"byte-identical={identical}, fig1 rows={len(fig1)} ok={fig1_ok}, "
        f"fig2 rows={len(fig2)} first={v2[0]:.4f} ok={fig2_ok}, {dt:.1f}s",
    )
    assert identical
    assert fig1_ok
    assert fig2_ok
    assert dt < 30.0


def test_criterion_10_cf_uniqueness_trend():
    t0 = time.perf_counter()
    shallow = mc_cf_rho(2, 10**5, seed=0)
    deep = mc_cf_rho(32, 10**5, seed=0)
    gap = deep.estimate - shallow.estimate
    need = 3.0 * (deep.standard_error + shallow.standard_error)
    dt = time.perf_counter() - t0
    ok = gap > need and dt < 120.0
    _verdict(
        10, ok,
        f"rho_hat(32)={deep.estimate:.4f}+-{deep.standard_error:.4f} vs "
        f"rho_hat(2)={shallow.estimate:.4f}+-{shallow.standard_error:.4f}, "
        f"gap {gap:.4f} > {need:.4f}, {dt:.1f}s",
    )
    assert gap > need
    assert dt < 120.0
