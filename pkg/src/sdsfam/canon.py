"""Equivalence of difference families and their power-sum normal form.

The equivalence group is generated by per-block translation, negation and
complementation, a global unit multiplier and (for v even with m*v = 4n) the
global dagger map X -> X ^ {odd residues}.  Every word in these generators
reduces to the fixed shape

    dagger (optional) -> multiplier -> per block: negate, complement, translate

which is what :class:`GroupElement` encodes and :func:`orbit_candidates`
enumerates.

The normal form minimises the summed power-sum vector
(sigma_0, ..., sigma_{v-1}) over the orbit.  For a fixed choice of multiplier
and dagger the per-block parts act independently, and the lexicographic
minimum of a sum of independently chosen vectors is the sum of the
individual minima (induct on the prefix length).  Since the subset order is
injective, each block then has a unique minimiser, so the whole orbit
minimum is found among at most 2*phi(v) candidate tuples.  The brute-force
stream in :func:`orbit_candidates` is kept as an independent check.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Iterator, Literal, Sequence

from .diffcheck import Family, ParameterSet, is_feasible, verify_sds
from .errors import (
    InfeasibleParametersError,
    NotAnSDSError,
    ShapeMismatchError,
    TransformError,
)
from .zmod import Block, LazySigma, SigmaVector, units

Kind = Literal["translate", "multiply", "negate", "complement", "dagger"]


@dataclass(frozen=True)
class ElementaryTransform:
    kind: Kind
    block: int | None = None
    value: int | None = None

    @classmethod
    def translate(cls, block, t):
        return cls("translate", block, t)

    @classmethod
    def multiply(cls, a):
        return cls("multiply", None, a)

    @classmethod
    def negate(cls, block):
        return cls("negate", block)

    @classmethod
    def complement(cls, block):
        return cls("complement", block)

    @classmethod
    def dagger(cls):
        return cls("dagger")


def dagger_applies(family: Family) -> bool:
    """True iff v is even and m*v = 4n for this (verified) family."""
    if family.v % 2:
        return False
    rep = verify_sds(family)
    if not rep.is_sds:
        return False
    return family.m * family.v == 4 * rep.parameters.n


def apply_transform(family: Family, t: ElementaryTransform) -> Family:
    v, blocks = family.v, list(family.blocks)
    if t.kind in ("translate", "negate", "complement"):
        if t.block is None or not 0 <= t.block < len(blocks):
            raise TransformError(f"block index {t.block} out of range for m={len(blocks)}")
        b = blocks[t.block]
        if t.kind == "translate":
            blocks[t.block] = b.translate(t.value)
        elif t.kind == "negate":
            blocks[t.block] = b.negate()
        else:
            blocks[t.block] = b.complement()
    elif t.kind == "multiply":
        if gcd(t.value, v) != 1:
            raise TransformError(f"multiplier {t.value} is not a unit mod {v}")
        blocks = [b.scale(t.value) for b in blocks]
    elif t.kind == "dagger":
        if not dagger_applies(family):
            raise TransformError("dagger needs v even and m*v = 4n")
        blocks = [b.dagger() for b in blocks]
    else:
        raise TransformError(f"unknown transform {t.kind!r}")
    return Family(v, tuple(blocks))


@dataclass(frozen=True)
class GroupElement:
    multiplier: int
    dagger: bool
    negations: tuple[int, ...]  # +1 or -1 per block
    complements: tuple[bool, ...]
    translations: tuple[int, ...]

    @classmethod
    def identity(cls, m):
        return cls(1, False, (1,) * m, (False,) * m, (0,) * m)

    def apply(self, family: Family) -> Family:
        if self.dagger and not dagger_applies(family):
            raise TransformError("dagger needs v even and m*v = 4n")
        if gcd(self.multiplier, family.v) != 1:
            raise TransformError(f"multiplier {self.multiplier} is not a unit mod {family.v}")
        out = []
        for i, b in enumerate(family.blocks):
            if self.dagger:
                b = b.dagger()
            b = b.scale(self.multiplier * self.negations[i])
            if self.complements[i]:
                b = b.complement()
            out.append(b.translate(self.translations[i]))
        return Family(family.v, tuple(out))


def group_elements(family: Family) -> Iterator[GroupElement]:
    v, m = family.v, family.m
    daggers = (False, True) if dagger_applies(family) else (False,)
    for a in units(v):
        for dg in daggers:
            for neg in itertools.product((1, -1), repeat=m):
                for comp in itertools.product((False, True), repeat=m):
                    for tr in itertools.product(range(v), repeat=m):
                        yield GroupElement(a, dg, neg, comp, tr)


def orbit_candidates(family: Family) -> Iterator[Family]:
    """Every group image of ``family`` (with repetitions)."""
    for g in group_elements(family):
        yield g.apply(family)


def family_sigma(family: Family, depth: int) -> SigmaVector:
    sums = [LazySigma(b.elements) for b in family.blocks]
    return SigmaVector(tuple(sum(s[d] for s in sums) for d in range(depth)))


def _check_shape(x: Family, y: Family):
    if x.v != y.v or x.m != y.m:
        raise ShapeMismatchError(f"families differ in shape: v={x.v},m={x.m} vs v={y.v},m={y.m}")


def compare_families(x: Family, y: Family) -> int:
    """Lexicographic comparison of summed power sums over d = 0..v-1.

    This is a preorder: 0 does not imply x == y.
    """
    _check_shape(x, y)
    sx = [LazySigma(b.elements) for b in x.blocks]
    sy = [LazySigma(b.elements) for b in y.blocks]
    for d in range(x.v):
        a = sum(s[d] for s in sx)
        b = sum(s[d] for s in sy)
        if a != b:
            return -1 if a < b else 1
    return 0


def _argmin_progressive(cands: list, sums_of, depth: int) -> list:
    """Keep candidates with lexicographically least power-sum vector.

    ``sums_of(c)`` returns the list of LazySigma objects whose sum gives the
    candidate's vector.  Depth-by-depth filtering; stops once one distinct
    candidate remains.
    """
    cands = list(dict.fromkeys(cands))
    lazy = {c: sums_of(c) for c in cands}
    for d in range(depth):
        if len(cands) == 1:
            break
        vals = [sum(s[d] for s in lazy[c]) for c in cands]
        best = min(vals)
        cands = [c for c, val in zip(cands, vals) if val == best]
    return cands


@lru_cache(maxsize=1 << 16)
def _block_min(v: int, elements: tuple[int, ...]) -> tuple[int, ...]:
    """Least subset in the orbit of ``elements`` under translation, negation, complement."""
    if 2 * len(elements) > v:
        bases = [tuple(x for x in range(v) if x not in set(elements))]
    elif 2 * len(elements) == v:
        s = set(elements)
        bases = [elements, tuple(x for x in range(v) if x not in s)]
    else:
        bases = [elements]
    return _trans_neg_min(v, bases)


def _trans_neg_min(v, bases):
    if not bases[0]:
        return ()
    cands = []
    for base in bases:
        for sgn in (1, -1):
            img = [(sgn * x) % v for x in base]
            # The minimum contains 0, so only translations putting some element at 0 matter.
            for x0 in img:
                cands.append(tuple(sorted((x - x0) % v for x in img)))
    best = _argmin_progressive(cands, lambda c: [LazySigma(c)], v)
    assert len(best) == 1
    return best[0]


@lru_cache(maxsize=1 << 16)
def _translate_negate_min(v: int, elements: tuple[int, ...]) -> tuple[int, ...]:
    return _trans_neg_min(v, [elements])


def _output_order(tup):
    # Larger blocks first; equal sizes in lexicographic element order (the tabulated convention).
    return tuple(sorted(tup, key=lambda b: (-len(b), b)))


@dataclass(frozen=True)
class NormalFormResult:
    representative: Family
    sigma: SigmaVector
    unique_up_to_permutation: bool
    minimal_set_size: int
    minimizers: frozenset  # ordered tuples (block order as in the orbit)


def minimal_tuples(family: Family) -> list[tuple[tuple[int, ...], ...]]:
    """All ordered tuples in the orbit attaining the least power-sum vector."""
    v = family.v
    daggers = (False, True) if dagger_applies(family) else (False,)
    cands = []
    for dg in daggers:
        base = [b.dagger() if dg else b for b in family.blocks]
        for a in units(v):
            if 2 * a > v:  # -a gives the same tuple: negation is per-block
                continue
            cands.append(tuple(_block_min(v, b.scale(a).elements) for b in base))
    return _argmin_progressive(cands, lambda c: [LazySigma(x) for x in c], v)


def normal_form(family: Family) -> NormalFormResult:
    if not verify_sds(family).is_sds:
        raise NotAnSDSError(f"not a difference family: {family}")
    v = family.v
    mins = minimal_tuples(family)
    ordered = sorted({_output_order(t) for t in mins}, key=lambda t: [x for b in t for x in b])
    rep = Family(v, tuple(Block(v, b) for b in ordered[0]))
    return NormalFormResult(
        representative=rep,
        sigma=family_sigma(rep, v),
        unique_up_to_permutation=len(ordered) == 1,
        minimal_set_size=len(mins),
        minimizers=frozenset(mins),
    )


def are_equivalent(x: Family, y: Family) -> bool:
    _check_shape(x, y)
    for f in (x, y):
        if not verify_sds(f).is_sds:
            raise NotAnSDSError(f"not a difference family: {f}")
    return not set(minimal_tuples(x)).isdisjoint(minimal_tuples(y))


def _table(v, elements):
    t = [0] * v
    for x in elements:
        for y in elements:
            t[(y - x) % v] += 1
    return t


def enumerate_classes(params: ParameterSet) -> list[NormalFormResult]:
    """One normal-form representative per equivalence class with these parameters.

    The first block ranges over subsets containing 0 that are least in their
    translation/negation orbit; the second block over subsets containing 0,
    looked up by the difference table it must have.
    """
    if len(params.sizes) != 2 or not is_feasible(params):
        raise InfeasibleParametersError(f"{params} is not a feasible two-block parameter set")
    v, (r, s), lam = params.v, params.sizes, params.lam
    by_table: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
    for rest in itertools.combinations(range(1, v), s - 1):
        x2 = (0,) + rest
        by_table.setdefault(tuple(_table(v, x2)[1:]), []).append(x2)
    found: dict[Family, NormalFormResult] = {}
    for rest in itertools.combinations(range(1, v), r - 1):
        x1 = (0,) + rest
        if _translate_negate_min(v, x1) != x1:
            continue
        t1 = _table(v, x1)
        target = tuple(lam - c for c in t1[1:])
        for x2 in by_table.get(target, ()):
            fam = Family(v, (Block(v, x1), Block(v, x2)))
            nf = normal_form(fam)
            found.setdefault(nf.representative, nf)
    return sorted(found.values(), key=lambda nf: [x for b in nf.representative.blocks for x in b])
