"""Print the feasible (v;r,s;lambda) census with type tags and corpus status."""

import argparse
from collections import Counter

from sdsfam.corpus import load_corpus
from sdsfam.diffcheck import enumerate_feasible
from sdsfam.seqtools import classify


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--vmax", type=int, default=50)
    args = ap.parse_args()

    status = {}
    for r in load_corpus(tables=(3, 4, 5, 6)):
        status.setdefault(r.params, Counter())[r.status] += 1
    params = enumerate_feasible(args.vmax)
    for p in params:
        t = classify(p)
        tags = ",".join(k for k, on in (("DO", t.d_optimal), ("PP", t.periodic_pair), ("EQ", t.equal_blocks)) if on)
        st = status.get(p, Counter())
        print(f"{str(p):18s} n={t.n:<3d} {tags:9s} " + " ".join(f"{k}={st[k]}" for k in sorted(st)))
    print(f"# {len(params)} feasible parameter sets with v <= {args.vmax}")


if __name__ == "__main__":
    main()
