"""Success rate and run time of the genetic search over many seeds."""

import argparse
import statistics
import time

from sdsfam.canon import normal_form
from sdsfam.diffcheck import ParameterSet
from sdsfam.searcher import SearchConfig, search

DEFAULT = ["(5;2,2;1)", "(13;4,4;2)", "(15;6,4;3)", "(19;7,6;4)"]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("params", nargs="*", default=DEFAULT)
    ap.add_argument("--seeds", type=int, default=100)
    ap.add_argument("--time-limit", type=float, default=60.0)
    ap.add_argument("--islands", type=int, default=1)
    args = ap.parse_args()

    for text in args.params:
        p = ParameterSet.parse(text)
        times, classes, ok = [], set(), 0
        for seed in range(args.seeds):
            t0 = time.perf_counter()
            f, stats = search(p, SearchConfig(rng_seed=seed, time_limit=args.time_limit, islands=args.islands))
            times.append(time.perf_counter() - t0)
            if f is not None:
                ok += 1
                classes.add(normal_form(f).representative)
        print(
            f"{p}: {ok}/{args.seeds} found, {len(classes)} classes hit, "
            f"median {statistics.median(times):.3f}s, max {max(times):.3f}s"
        )


if __name__ == "__main__":
    main()
