#!/usr/bin/env python3
"""Run the randomized verification suites and the Gaussian example check.

Prints per-check slack ranges and exits nonzero if any suite reports a
violation.  Seeds and trial counts mirror the defaults used in the test
suite, so this is a quick standalone health check:

    python3 scripts/run_suites.py --trials 200 --seed 42
"""

import argparse
import sys
import time

from qig.harness import (
    GaussianSpec,
    gaussian_check,
    monotone_divergence_suite,
    monotone_metric_suite,
)


def show(report):
    print(f"\n== {report.suite} (seed {report.master_seed}, trials {report.trials}) ==")
    for name, (lo, hi) in report.slack_range.items():
        print(f"  {name:>26s}: slack in [{lo:+.3e}, {hi:+.3e}]")
    for trial, name, slack in report.violations:
        print(f"  VIOLATION trial {trial} {name}: {slack:+.3e}")
    print(f"  pass: {report.passed}")
    return report.passed


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--dims", type=str, default="2,3")
    ap.add_argument("--seed", type=int, default=42)
    args = ap.parse_args()
    dims = tuple(int(d) for d in args.dims.split(","))

    t0 = time.time()
    ok = show(monotone_metric_suite(args.trials, dims, args.seed))
    ok &= show(monotone_divergence_suite(args.trials, dims, args.seed + 1))

    gauss = gaussian_check(GaussianSpec(sigma2=1.0, hbar=1.0, truncation=80))
    d = gauss.details
    print(f"\n== gaussian example (sigma^2 = 1, hbar = 1, N = 80) ==")
    print(f"  convention: {d['convention']}")
    print(f"  max relative entry error: {d['max_relative_entry_error']:.3e}")
    print(f"  reverse bound {d['reverse_bound']:.6f} (reference {d['reverse_bound_reference']:.2f})")
    print(f"  pass: {gauss.passed}")
    ok &= gauss.passed

    print(f"\ntotal {time.time() - t0:.1f} s")
    return 0 if ok else 2


if __name__ == "__main__":
    sys.exit(main())
