"""Residue-ring helpers: blocks of Z_v, power sums and the power-sum subset order.

Blocks are compared by the sequence (sigma_0, sigma_1, ..., sigma_{v-1}) where
sigma_d is the sum of d-th powers of the block's representatives in [0, v),
computed in exact Python integers.  Most comparisons resolve at d <= 2, so
every comparison here is lazy.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Sequence

from .errors import DuplicateElementError, ModulusError, ModulusMismatchError, ParseError


@dataclass(frozen=True)
class Block:
    v: int
    elements: tuple[int, ...]

    def __post_init__(self):
        if self.v < 2:
            raise ModulusError(f"modulus must be >= 2, got {self.v}")

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x % self.v in self._set

    @property
    def _set(self):
        return frozenset(self.elements)

    def __str__(self):
        return "{" + ",".join(map(str, self.elements)) + "}"

    # Elementary maps on a single block.
    def translate(self, t: int) -> Block:
        return _mk(self.v, ((x + t) % self.v for x in self.elements))

    def scale(self, a: int) -> Block:
        return _mk(self.v, ((a * x) % self.v for x in self.elements))

    def negate(self) -> Block:
        return self.scale(-1)

    def complement(self) -> Block:
        s = self._set
        return Block(self.v, tuple(x for x in range(self.v) if x not in s))

    def dagger(self) -> Block:
        """Symmetric difference with the odd residues."""
        s = self._set
        odd = set(range(1, self.v, 2))
        return _mk(self.v, s.symmetric_difference(odd))


def _mk(v, elements):
    return Block(v, tuple(sorted(elements)))


def make_block(v: int, elements: Iterable[int], strict: bool = False) -> Block:
    """Build a block from arbitrary integers, reducing them mod v.

    With ``strict=True`` a duplicate after reduction raises instead of being
    merged.
    """
    if v < 2:
        raise ModulusError(f"modulus must be >= 2, got {v}")
    reduced = [x % v for x in elements]
    uniq = set(reduced)
    if strict and len(uniq) != len(reduced):
        dups = sorted({x for x in reduced if reduced.count(x) > 1})
        raise DuplicateElementError(f"duplicate residues mod {v}: {dups}")
    return Block(v, tuple(sorted(uniq)))


def units(v: int) -> list[int]:
    return [a for a in range(1, v) if gcd(a, v) == 1]


def sigma(block: Block | Sequence[int], d: int) -> int:
    # 0**0 == 1 in Python, matching the x^0 = 1 convention.
    return sum(x**d for x in block)


@dataclass(frozen=True)
class SigmaVector:
    entries: tuple[int, ...]

    @property
    def depth(self):
        return len(self.entries)

    def __getitem__(self, d):
        return self.entries[d]


def sigma_vector(block: Block, depth: int | None = None) -> SigmaVector:
    if depth is None:
        depth = block.v
    return SigmaVector(tuple(sigma(block, d) for d in range(depth)))


class LazySigma:
    """Memoised power sums of a fixed element list, computed on demand."""

    __slots__ = ("elements", "_powers", "_sums")

    def __init__(self, elements: Sequence[int]):
        self.elements = tuple(elements)
        self._powers = [1] * len(self.elements)
        self._sums = [len(self.elements)]

    def __getitem__(self, d: int) -> int:
        sums = self._sums
        while len(sums) <= d:
            p = self._powers
            for i, x in enumerate(self.elements):
                p[i] *= x
            sums.append(sum(p))
        return sums[d]


def compare_sigma(x: Sequence[int], y: Sequence[int], depth: int) -> int:
    """Lexicographic comparison of power sums of two element lists over d < depth.

    Returns -1, 0 or 1.
    """
    if len(x) != len(y):
        return -1 if len(x) < len(y) else 1
    lx, ly = LazySigma(x), LazySigma(y)
    for d in range(1, depth):
        a, b = lx[d], ly[d]
        if a != b:
            return -1 if a < b else 1
    return 0


def compare_blocks(x: Block, y: Block) -> int:
    """Total order on subsets of Z_v: -1, 0 or 1.

    Equality over all v power sums implies set equality, so 0 is returned
    exactly when the blocks are equal.
    """
    if x.v != y.v:
        raise ModulusMismatchError(f"moduli differ: {x.v} vs {y.v}")
    if x.elements == y.elements:
        return 0
    return compare_sigma(x.elements, y.elements, x.v)


@dataclass(frozen=True, order=False)
class BlockKey:
    """Sort key wrapping compare_blocks, for use with sorted()/min()."""

    block: Block = field()

    def __lt__(self, other):
        return compare_blocks(self.block, other.block) < 0

    def __eq__(self, other):
        return self.block == other.block

    def __hash__(self):
        return hash(self.block)


def parse_block(v: int, text: str) -> Block:
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise ValueError(f"block must look like {{a,b,c}}: {text!r}")
    inner = text[1:-1].strip()
    try:
        elements = [int(t) for t in inner.split(",")] if inner else []
    except ValueError:
        raise ParseError(f"block elements must be integers: {text!r}") from None
    return make_block(v, elements, strict=True)
