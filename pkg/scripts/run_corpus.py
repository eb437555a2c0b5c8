#!/usr/bin/env python3
"""Run the regression fixtures and print a verdict table."""
import argparse
import sys

from thinwalls.corpus import run_all


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--only", help="a single fixture family")
    args = ap.parse_args(argv)
    try:
        report = run_all(args.only)
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return 3
    for name, res in report.items():
        for v in res["verdicts"]:
            mark = "ok  " if v["ok"] else "FAIL"
            print(f"{mark} {name:32} {v['name']:52} expected={v['expected']!r} observed={v['observed']!r}"
                  f" {v['seconds']:.3f}s")
    return 0 if all(r["ok"] for r in report.values()) else 1


if __name__ == "__main__":
    sys.exit(main())
