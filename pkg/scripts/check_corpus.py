"""Verify the bundled tables and report failures, fixpoints and duplicates."""

import argparse
import time

from sdsfam.cli import format_report
from sdsfam.corpus import load_corpus, verify_corpus


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--data", default=None)
    ap.add_argument("--deep-equiv", action="store_true")
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    t0 = time.perf_counter()
    rep = verify_corpus(load_corpus(args.data), deep_equiv=args.deep_equiv, workers=args.workers)
    print(format_report(rep))
    print(f"# status counts {rep.status_counts}; {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
