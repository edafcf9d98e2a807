"""Command-line surface: every computation as a subcommand emitting CSV.

Conventions shared by all subcommands:

* every CSV starts with a header row and uses "\n" line endings;
* floating values are printed with 17 significant digits (round-trippable),
  exact rationals as "p/q" strings;
* the same invocation with the same seed produces byte-identical output;
* exit status 0 means every computation certified its error bound (or, for
  Monte Carlo, completed within its sampling contract), 1 means a
  computation failed at runtime, 2 means the invocation itself was invalid.
"""

import argparse
import csv
import math
import os
import sys
from contextlib import contextmanager
from fractions import Fraction
from typing import List, Optional, Sequence

from .contfrac import mc_cf_rho, mc_cf_trimmed
from .expansion import expand, max_cdf_exact, reconstruct
from .extrema import rho_exact, rho_series
from .precision import PrecisionError
from .simulation import mc_max_scaled_cdf, mc_rho, mc_trimmed_trajectory
from .trimming import c_k, j2_partial_sums

__all__ = ["main"]


class _UsageError(Exception):
    """Invalid flag value caught before any computation starts."""


def _fmt(v) -> str:
    return f"{float(v):.17g}"


@contextmanager
def _out_stream(path: Optional[str]):
    if path is None:
        yield sys.stdout
    else:
        fh = open(path, "w", newline="")
        try:
            yield fh
        finally:
            fh.close()


def _csv_writer(fh):
    return csv.writer(fh, lineterminator="\n")


def _require(cond: bool, message: str):
    if not cond:
        raise _UsageError(message)


def _rho_rows(k_max: int, mode: str, precision_bits: int, tol: float,
              samples: int, seed: int) -> List[List[str]]:
    methods = ["exact", "series", "mc"] if mode == "all" else [mode]
    rows = []
    for k in range(2, k_max + 1):
        for method in methods:
            if method == "exact":
                est = rho_exact(k, precision_bits)
                rows.append([str(k), est.method, _fmt(est.value.value),
                             _fmt(est.error_bound)])
            elif method == "series":
                est = rho_series(k, tol)
                rows.append([str(k), est.method, _fmt(est.value.value),
                             _fmt(est.error_bound)])
            else:
                r = mc_rho(k, samples, seed=seed)
                # for sampled rows the bound column carries the standard
                # error, a statistical scale rather than a certified bound
                rows.append([str(k), "monte-carlo", _fmt(r.estimate),
                             _fmt(r.standard_error)])
    return rows


def cmd_rho(args) -> int:
    _require(args.kmax >= 2, "--kmax must be >= 2")
    _require(args.precision_bits >= 8, "--precision-bits must be >= 8")
    _require(args.tol > 0.0, "--tol must be positive")
    _require(args.samples >= 100, "--samples must be >= 100")
    rows = _rho_rows(args.kmax, args.mode, args.precision_bits, args.tol,
                     args.samples, args.seed)
    with _out_stream(args.out) as fh:
        w = _csv_writer(fh)
        w.writerow(["k", "method", "value", "error_bound"])
        w.writerows(rows)
    return 0


def cmd_expand(args) -> int:
    try:
        x = Fraction(args.value)
    except (ValueError, ZeroDivisionError) as exc:
        raise _UsageError(f"cannot parse {args.value!r} as a rational: {exc}")
    _require(0 < x <= 1, "value must lie in (0, 1]")
    _require(args.count >= 1, "--count must be >= 1")
    seq = expand(x, args.count)
    with _out_stream(args.out) as fh:
        w = _csv_writer(fh)
        w.writerow(["index", "digit"])
        for i, d in enumerate(seq.digits, start=1):
            w.writerow([str(i), str(d)])
        w.writerow(["remainder", str(seq.remainder)])
    return 0


def cmd_reconstruct(args) -> int:
    try:
        digits = tuple(int(part) for part in args.digits.split(","))
    except ValueError:
        raise _UsageError(f"cannot parse {args.digits!r} as comma-separated integers")
    _require(len(digits) >= 1, "at least one digit is required")
    _require(all(d >= 1 for d in digits), "digits must be >= 1")
    value = reconstruct(digits)
    with _out_stream(args.out) as fh:
        w = _csv_writer(fh)
        w.writerow(["field", "value"])
        w.writerow(["exact", str(value)])
        w.writerow(["approx", _fmt(value)])
    return 0


def _j2_rows(n_max: int) -> List[List[str]]:
    # row N carries the partial sum of all series terms with index below N,
    # so the table starts at N = 3 (one term) and has n_max - 2 rows
    sums, _ = j2_partial_sums(n_max - 1)
    return [[str(n), _fmt(sums[n - 3])] for n in range(3, n_max + 1)]


def cmd_j2(args) -> int:
    _require(args.nmax >= 3, "--nmax must be >= 3")
    rows = _j2_rows(args.nmax)
    with _out_stream(args.out) as fh:
        w = _csv_writer(fh)
        w.writerow(["N", "partial_sum"])
        w.writerows(rows)
    return 0


def _decade_checkpoints(k_max: int) -> List[int]:
    cps = []
    p = 10
    while p < k_max:
        cps.append(p)
        p *= 10
    cps.append(k_max)
    return cps


def cmd_trim(args) -> int:
    _require(args.kmax >= 2, "--kmax must be >= 2")
    _require(args.seeds >= 1, "--seeds must be >= 1")
    checkpoints = _decade_checkpoints(args.kmax)
    targets = {k: c_k(k) for k in checkpoints}
    with _out_stream(args.out) as fh:
        w = _csv_writer(fh)
        w.writerow(["seed", "k", "statistic", "c_k"])
        for seed in range(args.seed, args.seed + args.seeds):
            for k, stat in mc_trimmed_trajectory(args.kmax, checkpoints, seed=seed):
                w.writerow([str(seed), str(k), _fmt(stat), _fmt(targets[k])])
    return 0


def cmd_maxdist(args) -> int:
    _require(args.k >= 1, "--k must be >= 1")
    _require(args.samples >= 100, "--samples must be >= 100")
    c_list = args.c if args.c else [0.5, 1.0, 2.0]
    _require(all(c > 0 for c in c_list), "--c values must be positive")
    with _out_stream(args.out) as fh:
        w = _csv_writer(fh)
        w.writerow(["c", "empirical", "exact_finite_k", "limit_exp"])
        for c in c_list:
            r = mc_max_scaled_cdf(args.k, c, args.samples, seed=args.seed)
            threshold = math.ceil(c * args.k) - 1
            if threshold < 1:
                exact = 0.0
            else:
                exact = float(max_cdf_exact(args.k, threshold).value)
            w.writerow([_fmt(c), _fmt(r.estimate), _fmt(exact),
                        _fmt(math.exp(-1.0 / c))])
    return 0


def cmd_cf(args) -> int:
    k_list = args.k if args.k else [2, 8, 16, 32]
    _require(all(1 <= k <= 40 for k in k_list), "--k values must lie in [1, 40]")
    _require(args.samples >= 10**4, "--samples must be >= 10000")
    with _out_stream(args.out) as fh:
        w = _csv_writer(fh)
        if args.statistic == "rho":
            w.writerow(["k", "rho_hat", "se"])
            for k in k_list:
                r = mc_cf_rho(k, args.samples, seed=args.seed)
                w.writerow([str(k), _fmt(r.estimate), _fmt(r.standard_error)])
        else:
            # trimmed medians are reported against both candidate constants
            # (log 2 and its reciprocal); the table takes no side
            w.writerow(["k", "median", "se", "dist_log2", "dist_inv_log2"])
            for k in k_list:
                _require(k >= 2, "--k values must be >= 2 for the trimmed statistic")
                r = mc_cf_trimmed(k, args.samples, seed=args.seed)
                d1 = abs(r.estimate - math.log(2.0))
                d2 = abs(r.estimate - 1.0 / math.log(2.0))
                w.writerow([str(k), _fmt(r.estimate), _fmt(r.standard_error),
                            _fmt(d1), _fmt(d2)])
    return 0


def cmd_figures(args) -> int:
    out_dir = args.out if args.out else "."
    os.makedirs(out_dir, exist_ok=True)
    fig1 = os.path.join(out_dir, "fig1.csv")
    fig2 = os.path.join(out_dir, "fig2.csv")
    with open(fig1, "w", newline="") as fh:
        w = _csv_writer(fh)
        w.writerow(["k", "method", "value", "error_bound"])
        w.writerows(_rho_rows(40, "exact", 128, 1e-6, 10**6, 0))
    with open(fig2, "w", newline="") as fh:
        w = _csv_writer(fh)
        w.writerow(["N", "partial_sum"])
        w.writerows(_j2_rows(1000))
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="luroth",
        description="Digit statistics of the Luroth expansion: extreme-value "
        "probabilities, trimmed-sum normalizers, and related tables as CSV.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_out(p):
        p.add_argument("--out", metavar="PATH", default=None,
                       help="write output here instead of stdout")

    p = sub.add_parser("rho", help="probability the maximum digit is unique")
    p.add_argument("--kmax", type=int, default=40)
    p.add_argument("--mode", choices=["exact", "series", "mc", "all"],
                   default="exact")
    p.add_argument("--precision-bits", type=int, default=128)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--samples", type=int, default=10**6)
    p.add_argument("--seed", type=int, default=0)
    add_out(p)

    p = sub.add_parser("expand", help="exact digit expansion of a rational")
    p.add_argument("value", help="rational in (0, 1], e.g. 5/7")
    p.add_argument("--count", type=int, default=10)
    add_out(p)

    p = sub.add_parser("reconstruct", help="exact value of a finite digit string")
    p.add_argument("digits", help="comma-separated digits, e.g. 2,1")
    add_out(p)

    p = sub.add_parser("j2", help="partial sums of the inverse-square W-ratio series")
    p.add_argument("--nmax", type=int, default=1000)
    add_out(p)

    p = sub.add_parser("trim", help="trimmed-sum trajectories at decade checkpoints")
    p.add_argument("--kmax", type=int, default=10**6)
    p.add_argument("--seeds", type=int, default=32)
    p.add_argument("--seed", type=int, default=0,
                   help="first seed; rows cover seed..seed+seeds-1")
    add_out(p)

    p = sub.add_parser("maxdist", help="scaled-maximum CDF: sampled vs exact vs limit")
    p.add_argument("--k", type=int, default=1000)
    p.add_argument("--c", type=float, action="append",
                   help="scale point, repeatable (default 0.5 1 2)")
    p.add_argument("--samples", type=int, default=10**6)
    p.add_argument("--seed", type=int, default=0)
    add_out(p)

    p = sub.add_parser("cf", help="continued-fraction digit statistics (sampled)")
    p.add_argument("--k", type=int, action="append",
                   help="digit depth, repeatable (default 2 8 16 32)")
    p.add_argument("--statistic", choices=["rho", "trimmed"], default="rho")
    p.add_argument("--samples", type=int, default=10**6)
    p.add_argument("--seed", type=int, default=0)
    add_out(p)

    p = sub.add_parser("figures", help="write fig1.csv and fig2.csv into a directory")
    p.add_argument("--out", metavar="DIR", default=".",
                   help="target directory (created if missing)")

    return parser


_DISPATCH = {
    "rho": cmd_rho,
    "expand": cmd_expand,
    "reconstruct": cmd_reconstruct,
    "j2": cmd_j2,
    "trim": cmd_trim,
    "maxdist": cmd_maxdist,
    "cf": cmd_cf,
    "figures": cmd_figures,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _DISPATCH[args.command](args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (PrecisionError, ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
