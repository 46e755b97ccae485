#!/usr/bin/env python3
"""Run every verification suite and print a PASS/FAIL table with timings."""

import argparse
import time

from sqext.verify import SUITES


def main(names) -> int:
    bad = 0
    for name in names:
        start = time.perf_counter()
        rep = SUITES[name]()
        passed = sum(c.ok for c in rep.checks)
        print(f"{'PASS' if rep.ok else 'FAIL'} {name:18s} {passed:3d}/{len(rep.checks):<3d} {time.perf_counter() - start:6.2f}s")
        for c in rep.checks:
            if not c.ok:
                print(f"     {c.line()}")
        bad += not rep.ok
    return 1 if bad else 0


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("suites", nargs="*", help=f"any of {', '.join(SUITES)} (default: all)")
    names = p.parse_args().suites or list(SUITES)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        p.error(f"unknown suites {unknown}")
    raise SystemExit(main(names))
