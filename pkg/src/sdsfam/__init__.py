"""Cyclic supplementary difference sets: verification, normal forms, search."""

from .canon import are_equivalent, enumerate_classes, normal_form
from .diffcheck import Family, ParameterSet, enumerate_feasible, is_feasible, make_family, parse_family, verify_sds
from .errors import SDSError
from .searcher import SearchConfig, search
from .zmod import Block, make_block

__all__ = [
    "Block",
    "Family",
    "ParameterSet",
    "SDSError",
    "SearchConfig",
    "are_equivalent",
    "enumerate_classes",
    "enumerate_feasible",
    "is_feasible",
    "make_block",
    "make_family",
    "normal_form",
    "parse_family",
    "search",
    "verify_sds",
]
