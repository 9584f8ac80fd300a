"""Tabulated difference families: record grammar, loading and batch checks.

One record per line::

    (v;k1,k2;lambda) | {e,e,...} {e,e,...} | TAG
    (v;k1,k2;lambda) | None | TAG          no family exists
    (v;k1,k2;lambda) | ? | -               existence open
    (v;k1,k2;lambda) | external(31) | DO   families listed elsewhere (optional class count)

``#`` starts a comment line.  Single-block records (difference sets) use one
block and the ``(v;k;lambda)`` form.
"""

from __future__ import annotations

import os
import re
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Literal

from .canon import are_equivalent, normal_form
from .diffcheck import Family, ParameterSet, verify_sds
from .errors import ParseError
from .zmod import parse_block

Status = Literal["family", "none", "open", "external"]

DEFAULT_DATA_DIR = Path(__file__).parent / "data"
TABLE_FILES = {t: f"table{t}.txt" for t in (1, 3, 4, 5, 6)}
CENSUS_FILE = "dopt_counts.txt"


@dataclass(frozen=True)
class CorpusRecord:
    params: ParameterSet
    status: Status
    tag: str
    family: Family | None = None
    count: int | None = None
    source_table: int | None = None


_PARAMS_RE = re.compile(r"\(\d+;\d+(?:,\d+)*;\d+\)")


def parse_record(line: str, source_table: int | None = None) -> CorpusRecord:
    parts = line.split("|")
    if len(parts) != 3:
        raise ParseError("expected three '|'-separated fields", column=1, line=line)
    offsets = [0, len(parts[0]) + 1, len(parts[0]) + len(parts[1]) + 2]
    ptext, body, tag = (p.strip() for p in parts)
    if not _PARAMS_RE.fullmatch(ptext):
        raise ParseError(f"bad parameter set {ptext!r}", column=offsets[0] + 1, line=line)
    params = ParameterSet.parse(ptext)
    if not tag:
        raise ParseError("missing tag", column=offsets[2] + 1, line=line)
    col = offsets[1] + 1 + (len(parts[1]) - len(parts[1].lstrip()))
    if body == "None":
        return CorpusRecord(params, "none", tag, source_table=source_table)
    if body == "?":
        return CorpusRecord(params, "open", tag, source_table=source_table)
    m = re.fullmatch(r"external(?:\((\d+)\))?", body)
    if m:
        count = int(m.group(1)) if m.group(1) else None
        return CorpusRecord(params, "external", tag, count=count, source_table=source_table)
    blocks = re.findall(r"\{[^{}]*\}", body)
    rest = re.sub(r"\{[^{}]*\}", lambda m: " " * len(m.group()), body)
    if not blocks or rest.strip():
        bad = next((i for i, c in enumerate(rest) if not c.isspace()), 0)
        raise ParseError(f"cannot parse blocks {body!r}", column=col + bad, line=line)
    try:
        family = Family(params.v, tuple(parse_block(params.v, b) for b in blocks))
    except ValueError as exc:
        raise ParseError(f"bad block: {exc}", column=col, line=line) from exc
    # Printed families list the larger block first, so sizes compare in order.
    if family.sizes != params.sizes:
        raise ParseError(
            f"block sizes {family.sizes} do not match parameters {params}", column=col, line=line
        )
    return CorpusRecord(params, "family", tag, family=family, source_table=source_table)


def render_record(rec: CorpusRecord) -> str:
    if rec.status == "family":
        body = str(rec.family)
    elif rec.status == "none":
        body = "None"
    elif rec.status == "open":
        body = "?"
    else:
        body = "external" if rec.count is None else f"external({rec.count})"
    return f"{rec.params} | {body} | {rec.tag}"


def data_dir(path: str | os.PathLike | None = None) -> Path:
    if path is not None:
        return Path(path)
    env = os.environ.get("SDS_DATA_DIR")
    return Path(env) if env else DEFAULT_DATA_DIR


def read_records(lines: Iterable[str], source_table: int | None = None) -> list[CorpusRecord]:
    out = []
    for lineno, line in enumerate(lines, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            out.append(parse_record(line, source_table))
        except ParseError as exc:
            raise ParseError(f"line {lineno}: {exc}", line=line) from exc
    return out


def load_corpus(path=None, tables: Iterable[int] = (1, 3, 4, 5, 6)) -> list[CorpusRecord]:
    base = data_dir(path)
    records = []
    for t in tables:
        f = base / TABLE_FILES[t]
        with open(f, encoding="utf-8") as fh:
            records.extend(read_records(fh, source_table=t))
    return records


def load_census_targets(path=None) -> list[tuple[ParameterSet, int | None]]:
    out = []
    with open(data_dir(path) / CENSUS_FILE, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            p, c = (x.strip() for x in line.split("|"))
            out.append((ParameterSet.parse(p), None if c == "?" else int(c)))
    return out


@dataclass
class Failure:
    index: int
    record: str
    reason: str
    witness: tuple[int, int] | None = None


@dataclass
class CorpusReport:
    total: int = 0
    family_records: int = 0
    verified: int = 0
    normal_form_fixpoints: int = 0
    printed_order_fixpoints: int = 0
    non_unique: list[int] = field(default_factory=list)
    equivalence_duplicates: list[tuple[int, int]] = field(default_factory=list)
    failures: list[Failure] = field(default_factory=list)
    status_counts: dict[str, int] = field(default_factory=dict)


def _check_one(args):
    idx, rec = args
    fam = rec.family
    rep = verify_sds(fam)
    if not rep.is_sds:
        return idx, "not-sds", rep.witness, None
    if rep.lam != rec.params.lam:
        return idx, f"index {rep.lam} != stated {rec.params.lam}", None, None
    nf = normal_form(fam)
    fixed = sorted(nf.representative.as_tuples()) == sorted(fam.as_tuples())
    exact = nf.representative == fam
    return idx, None, None, (fixed, exact, nf.unique_up_to_permutation, frozenset(nf.minimizers) if fam.m > 1 else None)


def verify_corpus(records: list[CorpusRecord], deep_equiv: bool = False, workers: int = 1) -> CorpusReport:
    """Verify every family record and flag equivalent duplicates per parameter set.

    Duplicates are detected by intersecting the sets of minimal orbit tuples,
    which is exact orbit membership.  ``deep_equiv`` runs are_equivalent on
    every pair sharing v and the number of blocks, across parameter sets.
    """
    report = CorpusReport(total=len(records))
    for rec in records:
        report.status_counts[rec.status] = report.status_counts.get(rec.status, 0) + 1
    jobs = [(i, r) for i, r in enumerate(records) if r.status == "family"]
    report.family_records = len(jobs)
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            results = list(ex.map(_check_one, jobs, chunksize=8))
    else:
        results = [_check_one(j) for j in jobs]

    minima = {}
    for idx, reason, witness, ok in results:
        if reason is not None:
            report.failures.append(Failure(idx, render_record(records[idx]), reason, witness))
            continue
        report.verified += 1
        fixed, exact, unique, mins = ok
        if fixed:
            report.normal_form_fixpoints += 1
        else:
            report.failures.append(Failure(idx, render_record(records[idx]), "not in normal form"))
        report.printed_order_fixpoints += exact
        if not unique:
            report.non_unique.append(idx)
        if mins is not None:
            minima[idx] = mins

    groups = defaultdict(list)
    for idx in minima:
        fam = records[idx].family
        # The deep pass also pairs records across parameter sets: complementing a
        # block changes the parameters but not the class.
        key = (fam.v, fam.m) if deep_equiv else (records[idx].params, fam.m)
        groups[key].append(idx)
    for idxs in groups.values():
        for a_pos, a in enumerate(idxs):
            for b in idxs[a_pos + 1 :]:
                if deep_equiv:
                    same = are_equivalent(records[a].family, records[b].family)
                else:
                    same = not minima[a].isdisjoint(minima[b])
                if same:
                    report.equivalence_duplicates.append((a, b))
    report.failures.sort(key=lambda f: f.index)
    return report
