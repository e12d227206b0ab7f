#!/usr/bin/env python3
"""Run the full verification battery for both wavelet families and print a
per-check summary; exits nonzero on any violated bound."""

import argparse
import json
import sys
from pathlib import Path

from blisnet.verify import run_verification


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--J", type=int, default=2)
    parser.add_argument("--m", type=int, default=2)
    parser.add_argument("--alpha", type=float, default=-0.5)
    parser.add_argument("--probes", type=int, default=50)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", type=Path, default=None)
    args = parser.parse_args()

    all_passed = True
    reports = {}
    for family in ("w1", "w2"):
        report = run_verification(
            family=family,
            J=args.J,
            order=args.m,
            alpha=args.alpha,
            probes=args.probes,
            seed=args.seed,
        )
        reports[family] = report
        all_passed &= report["passed"]
        for check in report["checks"]:
            mark = {"pass": ".", "fail": "F", "skip": "s"}[check["status"]]
            print(f"[{family}] {mark} {check['name']:45s} {check['graph']:8s} {check['note']}")
    if args.out:
        args.out.write_text(json.dumps(reports, indent=2))
    print("all passed" if all_passed else "FAILURES detected")
    return 0 if all_passed else 1


if __name__ == "__main__":
    sys.exit(main())
