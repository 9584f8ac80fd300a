"""Exhaustive equivalence-class enumeration for small parameter sets.

With no arguments, runs every census target with a known count and v <= 19.
"""

import argparse
import time

from sdsfam.canon import enumerate_classes
from sdsfam.corpus import load_census_targets
from sdsfam.diffcheck import ParameterSet


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("params", nargs="*", help='e.g. "(13;4,4;2)"')
    ap.add_argument("--show", action="store_true", help="print the representatives")
    args = ap.parse_args()

    if args.params:
        jobs = [(ParameterSet.parse(p), None) for p in args.params]
    else:
        jobs = [(p, c) for p, c in load_census_targets() if c is not None and p.v <= 19]
    for p, expected in jobs:
        t0 = time.perf_counter()
        classes = enumerate_classes(p)
        dt = time.perf_counter() - t0
        mark = "" if expected is None else (" ok" if len(classes) == expected else f" MISMATCH (expected {expected})")
        print(f"{p}: {len(classes)} classes in {dt:.2f}s{mark}")
        if args.show:
            for c in classes:
                print(f"    {c.representative}{'' if c.unique_up_to_permutation else '  (not unique)'}")


if __name__ == "__main__":
    main()
