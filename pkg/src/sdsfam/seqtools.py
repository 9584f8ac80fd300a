"""Binary sequences, autocorrelation, and the special SDS types.

A two-block family over Z_v corresponds to two +-1 sequences of length v
with a -1 exactly at the positions in each block.  For an SDS with order n
the summed periodic autocorrelation is 2v - 4n at every nonzero shift, so the
pair has zero periodic autocorrelation exactly when v = 2n.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .diffcheck import Family, ParameterSet, verify_sds
from .errors import LengthMismatchError, NotAnSDSError, ParseError, UnequalBlockSizesError
from .zmod import Block


@dataclass(frozen=True)
class BinarySequence:
    terms: tuple[int, ...]

    def __post_init__(self):
        if not self.terms:
            raise ValueError("sequence must have length >= 1")
        if any(t not in (1, -1) for t in self.terms):
            raise ValueError("terms must be +1 or -1")

    def __len__(self):
        return len(self.terms)

    def __str__(self):
        return "".join("+" if t == 1 else "-" for t in self.terms)

    @classmethod
    def parse(cls, text: str) -> BinarySequence:
        chars = [c for c in text if c not in ", \t;"]
        for i, c in enumerate(chars):
            if c not in "+-":
                raise ParseError(f"unexpected character {c!r} in sequence", column=i + 1)
        return cls(tuple(1 if c == "+" else -1 for c in chars))


@dataclass(frozen=True)
class SequencePair:
    first: BinarySequence
    second: BinarySequence


def pacf(seq: BinarySequence) -> list[int]:
    a, v = seq.terms, len(seq)
    return [sum(a[j] * a[(i + j) % v] for j in range(v)) for i in range(v)]


def nacf(seq: BinarySequence) -> list[int]:
    a, v = seq.terms, len(seq)
    return [sum(a[j] * a[i + j] for j in range(v - i)) for i in range(v)]


def _same_length(pair: SequencePair):
    if len(pair.first) != len(pair.second):
        raise LengthMismatchError(f"lengths differ: {len(pair.first)} vs {len(pair.second)}")


def pacf_sum(pair: SequencePair) -> list[int]:
    _same_length(pair)
    return [x + y for x, y in zip(pacf(pair.first), pacf(pair.second))]


def nacf_sum(pair: SequencePair) -> list[int]:
    return [x + y for x, y in itertools.zip_longest(nacf(pair.first), nacf(pair.second), fillvalue=0)]


def block_to_sequence(block: Block) -> BinarySequence:
    s = set(block.elements)
    return BinarySequence(tuple(-1 if j in s else 1 for j in range(block.v)))


def sds_to_sequences(family: Family) -> SequencePair:
    if family.m != 2:
        raise ValueError("need a two-block family")
    return SequencePair(*(block_to_sequence(b) for b in family.blocks))


def sequences_to_sds(pair: SequencePair) -> Family:
    _same_length(pair)
    v = len(pair.first)
    blocks = tuple(
        Block(v, tuple(j for j, t in enumerate(seq.terms) if t == -1)) for seq in (pair.first, pair.second)
    )
    return Family(v, blocks)


@dataclass(frozen=True)
class TypeTags:
    d_optimal: bool
    periodic_pair: bool
    equal_blocks: bool
    n: int


def classify(params: ParameterSet) -> TypeTags:
    r, s = params.sizes
    n = params.n
    return TypeTags(d_optimal=params.v == 2 * n + 1, periodic_pair=params.v == 2 * n, equal_blocks=r == s, n=n)


@dataclass(frozen=True)
class BibdParams:
    v: int
    b: int
    r_rep: int
    k: int
    lam: int

    def as_tuple(self):
        return (self.v, self.b, self.r_rep, self.k, self.lam)


def develop_bibd(family: Family) -> tuple[BibdParams, list[Block]]:
    """Develop two equal-size base blocks through Z_v into a 2-design.

    Repeated blocks are kept.  Replication and pair coverage are verified by
    direct counting before returning.
    """
    rep = verify_sds(family)
    if not rep.is_sds:
        raise NotAnSDSError(f"not a difference family: {family}")
    sizes = family.sizes
    if family.m != 2 or sizes[0] != sizes[1]:
        raise UnequalBlockSizesError(f"need two blocks of equal size, got {sizes}")
    v, k, lam = family.v, sizes[0], rep.lam
    blocks = [b.translate(t) for b in family.blocks for t in range(v)]
    params = BibdParams(v, 2 * v, 2 * k, k, lam)

    replication = [0] * v
    pairs = [[0] * v for _ in range(v)]
    for b in blocks:
        els = b.elements
        for x in els:
            replication[x] += 1
        for x, y in itertools.combinations(els, 2):
            pairs[x][y] += 1
    if any(c != params.r_rep for c in replication):
        raise AssertionError(f"replication counts {set(replication)} != {params.r_rep}")
    bad = [(x, y) for x in range(v) for y in range(x + 1, v) if pairs[x][y] != lam]
    if bad:
        raise AssertionError(f"pair {bad[0]} covered {pairs[bad[0][0]][bad[0][1]]} times, expected {lam}")
    return params, blocks


def pair_coverage(v: int, blocks: Sequence[Block]) -> dict[int, int]:
    """Histogram {times covered: number of unordered point pairs}."""
    pairs = {}
    for b in blocks:
        for p in itertools.combinations(b.elements, 2):
            pairs[p] = pairs.get(p, 0) + 1
    hist: dict[int, int] = {}
    for x, y in itertools.combinations(range(v), 2):
        c = pairs.get((x, y), 0)
        hist[c] = hist.get(c, 0) + 1
    return hist
