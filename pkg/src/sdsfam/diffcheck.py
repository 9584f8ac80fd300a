"""Difference tables, SDS verification and the feasible-parameter census."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ModulusMismatchError, ParseError
from .zmod import Block, make_block, parse_block


@dataclass(frozen=True)
class Family:
    v: int
    blocks: tuple[Block, ...]

    def __post_init__(self):
        for b in self.blocks:
            if b.v != self.v:
                raise ModulusMismatchError(f"block {b} has modulus {b.v}, family has {self.v}")

    @property
    def m(self):
        return len(self.blocks)

    @property
    def sizes(self):
        return tuple(len(b) for b in self.blocks)

    def as_tuples(self) -> tuple[tuple[int, ...], ...]:
        return tuple(b.elements for b in self.blocks)

    def __str__(self):
        return " ".join(str(b) for b in self.blocks)


def make_family(v: int, blocks: Iterable[Iterable[int]]) -> Family:
    return Family(v, tuple(b if isinstance(b, Block) else make_block(v, b) for b in blocks))


def parse_family(v: int, text: str) -> Family:
    """Parse ``{a,b} {c,d}`` (blocks separated by whitespace) over Z_v."""
    parts = re.findall(r"\{[^{}]*\}", text)
    leftover = re.sub(r"\{[^{}]*\}", "", text).strip()
    if leftover or not parts:
        raise ParseError(f"cannot parse family from {text!r}")
    return Family(v, tuple(parse_block(v, p) for p in parts))


@dataclass(frozen=True)
class ParameterSet:
    """(v; k_1,...,k_m; lambda).  Sizes are kept in non-increasing order."""

    v: int
    sizes: tuple[int, ...]
    lam: int

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(sorted(self.sizes, reverse=True)))

    @property
    def n(self):
        return sum(self.sizes) - self.lam

    @property
    def sort_key(self):
        return (self.v, self.lam, self.n)

    def __str__(self):
        return f"({self.v};{','.join(map(str, self.sizes))};{self.lam})"

    @classmethod
    def parse(cls, text: str) -> ParameterSet:
        m = re.fullmatch(r"\s*\(\s*(\d+)\s*;\s*(\d+(?:\s*,\s*\d+)*)\s*;\s*(\d+)\s*\)\s*", text)
        if not m:
            raise ParseError(f"bad parameter set {text!r}", column=1)
        sizes = tuple(int(s) for s in m.group(2).split(","))
        return cls(int(m.group(1)), sizes, int(m.group(3)))


@dataclass(frozen=True)
class DifferenceTable:
    v: int
    counts: tuple[int, ...]

    def __getitem__(self, a):
        return self.counts[a % self.v]


@dataclass(frozen=True)
class VerificationReport:
    is_sds: bool
    lam: int | None = None
    parameters: ParameterSet | None = None
    witness: tuple[int, int] | None = None


def _counts(v: int, elements: Sequence[int]) -> np.ndarray:
    if not elements:
        return np.zeros(v, dtype=np.int64)
    x = np.asarray(elements, dtype=np.int64)
    return np.bincount((x[None, :] - x[:, None]).ravel() % v, minlength=v)


def difference_table(block: Block) -> DifferenceTable:
    """counts[a] = #{(x, y) in X*X : y - x = a mod v}."""
    return DifferenceTable(block.v, tuple(int(c) for c in _counts(block.v, block.elements)))


def family_table(family: Family) -> DifferenceTable:
    total = np.zeros(family.v, dtype=np.int64)
    for b in family.blocks:
        total += _counts(family.v, b.elements)
    return DifferenceTable(family.v, tuple(int(c) for c in total))


def verify_sds(family: Family) -> VerificationReport:
    counts = family_table(family).counts
    ref = counts[1]
    for a in range(2, family.v):
        if counts[a] != ref:
            return VerificationReport(False, witness=(a, counts[a]))
    params = ParameterSet(family.v, family.sizes, ref)
    return VerificationReport(True, lam=ref, parameters=params)


def is_feasible(params: ParameterSet) -> bool:
    return sum(k * (k - 1) for k in params.sizes) == params.lam * (params.v - 1)


def enumerate_feasible(v_max: int) -> list[ParameterSet]:
    """All feasible (v;r,s;lambda) with v <= v_max and v >= 2r >= 2s >= 4."""
    out = []
    for v in range(4, v_max + 1):
        for s in range(2, v // 2 + 1):
            for r in range(s, v // 2 + 1):
                num = r * (r - 1) + s * (s - 1)
                if num % (v - 1) == 0:
                    out.append(ParameterSet(v, (r, s), num // (v - 1)))
    out.sort(key=lambda p: p.sort_key)
    return out
