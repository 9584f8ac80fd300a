"""Command-line front end.

Every command prints what the corresponding library call returns, formatted
by the ``format_*`` helpers below, so scripted output matches direct use.

Exit codes: 0 success / affirmative, 1 negative finding (not a difference
family, not equivalent, nothing found, corpus failures), 2 usage or data error.

Families are given inline (``"{0,1} {0,2}"``) or as ``@path``; a file holds
either bare blocks or one corpus record ``(v;r,s;lambda) | {..} {..} | TAG``.

``--json`` switches to one JSON object per line.  Field names:

* family: ``{"v": int, "blocks": [[int, ...], ...]}``
* verify: ``{"is_sds", "lambda", "n", "params", "witness"}``
* canon: ``{"family", "normal_form", "unique_up_to_permutation", "minimal_set_size"}``
* equiv: ``{"equivalent"}``
* feasible: ``{"params", "v", "sizes", "lambda", "n"}`` per line
* search: ``{"found", "family", "params", "stats"}``
* classify: ``{"params", "n", "d_optimal", "periodic_pair", "equal_blocks"}``
* pacf: ``{"kind", "values"}``
* golay2sds: ``{"family", "normal_form"}``
* bibd: ``{"v", "b", "r", "k", "lambda", "pair_coverage"}``
* corpus-check: ``{"total", "family_records", "verified", "normal_form_fixpoints",
  "printed_order_fixpoints", "equivalence_duplicates", "status_counts", "failures"}``
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import asdict
from pathlib import Path

from .canon import are_equivalent, normal_form
from .corpus import load_corpus, parse_record, verify_corpus
from .diffcheck import Family, ParameterSet, enumerate_feasible, make_family, parse_family, verify_sds
from .errors import NotAnSDSError, SDSError
from .searcher import SearchConfig, search
from .seqtools import BinarySequence, SequencePair, classify, develop_bibd, nacf, nacf_sum, pacf, pacf_sum, pair_coverage, sequences_to_sds

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# -- input ------------------------------------------------------------------

def _expand(text: str) -> str:
    if not text.startswith("@"):
        return text
    path = Path(text[1:])
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    body = [ln.strip() for ln in lines if ln.strip() and not ln.strip().startswith("#")]
    if not body:
        raise UsageError(f"{path} contains no data")
    return " ".join(body)


def _modulus(text: str) -> tuple[int, ParameterSet | None]:
    text = text.strip()
    if text.isdigit():
        return int(text), None
    p = ParameterSet.parse(text)
    return p.v, p


def read_family(args: list[str]) -> tuple[Family, ParameterSet | None]:
    """Family from ``[V_OR_PARAMS] BLOCKS`` where either token may be ``@file``."""
    if len(args) == 1:
        text = _expand(args[0])
        if "|" not in text:
            raise UsageError("a lone family argument must be a corpus record '(v;..;l) | {..} | TAG'")
        rec = parse_record(text)
        if rec.status != "family":
            raise UsageError(f"record has no family (status {rec.status})")
        return rec.family, rec.params
    if len(args) != 2:
        raise UsageError("expected V_OR_PARAMS FAMILY")
    v, params = _modulus(_expand(args[0]))
    text = _expand(args[1])
    if "|" in text:
        rec = parse_record(text)
        if rec.params.v != v or rec.status != "family":
            raise UsageError("record does not match the given modulus")
        return rec.family, params or rec.params
    fam = parse_family(v, text)
    if params is not None and tuple(sorted(fam.sizes, reverse=True)) != params.sizes:
        raise UsageError(f"block sizes {fam.sizes} do not match {params}")
    return fam, params


# -- formatting -------------------------------------------------------------

def family_json(f: Family) -> dict:
    return {"v": f.v, "blocks": [list(b) for b in f.as_tuples()]}


def family_from_json(d: dict) -> Family:
    return make_family(d["v"], d["blocks"])


def format_verify(rep, stated: ParameterSet | None) -> str:
    if not rep.is_sds:
        a, c = rep.witness
        return f"not-sds witness a={a} count={c}"
    line = f"lambda={rep.lam} n={rep.parameters.n}"
    if stated is not None and stated.lam != rep.lam:
        line += f" (stated lambda={stated.lam})"
    return line


def format_canon(nf) -> str:
    return f"{nf.representative}\nunique={'yes' if nf.unique_up_to_permutation else 'no'}"


def format_tags(params, tags) -> str:
    yn = lambda b: "yes" if b else "no"
    return (
        f"{params} n={tags.n} d_optimal={yn(tags.d_optimal)} "
        f"periodic_pair={yn(tags.periodic_pair)} equal_blocks={yn(tags.equal_blocks)}"
    )


def format_values(values) -> str:
    return " ".join(map(str, values))


def format_bibd(bp, hist) -> str:
    cover = " ".join(f"{c}:{hist[c]}" for c in sorted(hist))
    return f"v={bp.v} b={bp.b} r={bp.r_rep} k={bp.k} lambda={bp.lam}\npair_coverage {cover}"


def format_report(rep) -> str:
    lines = [
        f"records={rep.total} families={rep.family_records} verified={rep.verified} "
        f"fixpoints={rep.normal_form_fixpoints} printed_order={rep.printed_order_fixpoints} "
        f"duplicates={len(rep.equivalence_duplicates)} failures={len(rep.failures)}"
    ]
    for f in rep.failures:
        w = "" if f.witness is None else f" witness a={f.witness[0]} count={f.witness[1]}"
        lines.append(f"FAIL {f.index}: {f.record}: {f.reason}{w}")
    for a, b in rep.equivalence_duplicates:
        lines.append(f"DUPLICATE {a} {b}")
    return "\n".join(lines)


# -- commands ---------------------------------------------------------------

def cmd_verify(a, out):
    fam, params = read_family(a.family)
    rep = verify_sds(fam)
    ok = rep.is_sds and (params is None or params.lam == rep.lam)
    if a.json:
        out.append({
            "is_sds": rep.is_sds,
            "lambda": rep.lam,
            "n": rep.parameters.n if rep.parameters else None,
            "params": str(rep.parameters) if rep.parameters else None,
            "witness": list(rep.witness) if rep.witness else None,
        })
    else:
        out.append(format_verify(rep, params))
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_canon(a, out):
    fam, _ = read_family(a.family)
    nf = normal_form(fam)
    if a.json:
        out.append({
            "family": family_json(fam),
            "normal_form": family_json(nf.representative),
            "unique_up_to_permutation": nf.unique_up_to_permutation,
            "minimal_set_size": nf.minimal_set_size,
        })
    else:
        out.append(format_canon(nf))
    return EXIT_OK


def cmd_equiv(a, out):
    x, _ = read_family([a.modulus, a.first])
    y, _ = read_family([a.modulus, a.second])
    eq = are_equivalent(x, y)
    out.append({"equivalent": eq} if a.json else ("equivalent" if eq else "non-equivalent"))
    return EXIT_OK if eq else EXIT_NEGATIVE


def cmd_feasible(a, out):
    for p in enumerate_feasible(a.vmax):
        if a.json:
            out.append({"params": str(p), "v": p.v, "sizes": list(p.sizes), "lambda": p.lam, "n": p.n})
        else:
            out.append(str(p))
    return EXIT_OK


def cmd_search(a, out):
    params = ParameterSet.parse(a.params)
    cfg = SearchConfig(
        population_size=a.pop,
        max_generations=a.gens,
        restarts=a.restarts,
        rng_seed=a.seed,
        islands=a.islands,
        workers=a.workers,
        time_limit=a.time_limit,
    )
    fam, stats = search(params, cfg)
    if fam is not None and a.emit == "normal":
        fam = normal_form(fam).representative
    if a.json:
        out.append({
            "found": fam is not None,
            "family": family_json(fam) if fam else None,
            "params": str(params),
            "stats": asdict(stats),
        })
    else:
        out.append(str(fam) if fam else "none found")
        print(
            f"generations={stats.generations} evaluations={stats.evaluations} "
            f"best_fitness={stats.best_fitness} restarts={stats.restarts_used} elapsed={stats.elapsed:.2f}s",
            file=sys.stderr,
        )
    return EXIT_OK if fam else EXIT_NEGATIVE


def cmd_classify(a, out):
    params = ParameterSet.parse(a.params)
    if len(params.sizes) != 2:
        raise UsageError("classify expects (v;r,s;lambda)")
    tags = classify(params)
    if a.json:
        out.append({"params": str(params), **asdict(tags)})
    else:
        out.append(format_tags(params, tags))
    return EXIT_OK


def cmd_pacf(a, out):
    seqs = [BinarySequence.parse(_expand(s)) for s in a.sequences]
    if len(seqs) > 2:
        raise UsageError("pacf takes one or two sequences")
    if len(seqs) == 1:
        vals = nacf(seqs[0]) if a.aperiodic else pacf(seqs[0])
    else:
        pair = SequencePair(*seqs)
        vals = nacf_sum(pair) if a.aperiodic else pacf_sum(pair)
    kind = ("nacf" if a.aperiodic else "pacf") + ("_sum" if len(seqs) == 2 else "")
    out.append({"kind": kind, "values": vals} if a.json else format_values(vals))
    return EXIT_OK


def cmd_golay2sds(a, out):
    pair = SequencePair(BinarySequence.parse(_expand(a.first)), BinarySequence.parse(_expand(a.second)))
    fam = sequences_to_sds(pair)
    nf = normal_form(fam).representative
    if a.json:
        out.append({"family": family_json(fam), "normal_form": family_json(nf)})
    else:
        out.append(f"{fam}\n{nf}")
    return EXIT_OK


def cmd_bibd(a, out):
    fam, _ = read_family(a.family)
    bp, blocks = develop_bibd(fam)
    hist = pair_coverage(fam.v, blocks)
    if a.json:
        out.append({
            "v": bp.v, "b": bp.b, "r": bp.r_rep, "k": bp.k, "lambda": bp.lam,
            "pair_coverage": {str(c): hist[c] for c in sorted(hist)},
        })
    else:
        out.append(format_bibd(bp, hist))
    return EXIT_OK


def cmd_corpus_check(a, out):
    try:
        records = load_corpus(a.data)
    except OSError as exc:
        raise UsageError(f"cannot read corpus: {exc}") from exc
    rep = verify_corpus(records, deep_equiv=a.deep_equiv, workers=a.workers)
    if a.json:
        d = asdict(rep)
        d.pop("non_unique")
        d["equivalence_duplicates"] = [list(p) for p in rep.equivalence_duplicates]
        d["failures"] = [
            {**asdict(f), "witness": list(f.witness) if f.witness else None} for f in rep.failures
        ]
        out.append(d)
    else:
        out.append(format_report(rep))
    return EXIT_OK if not rep.failures and not rep.equivalence_duplicates else EXIT_NEGATIVE


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="line-delimited JSON output")

    p = argparse.ArgumentParser(prog="sdsfam", description=__doc__.split("\n")[0], parents=[common])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help):
        sp = sub.add_parser(name, help=help, parents=[common])
        sp.set_defaults(func=func)
        return sp

    sp = add("verify", cmd_verify, "check the difference property")
    sp.add_argument("family", nargs="+", help="[V|PARAMS] FAMILY, or @file")
    sp = add("canon", cmd_canon, "normal form of a family")
    sp.add_argument("family", nargs="+", help="V FAMILY, or @file")
    sp = add("equiv", cmd_equiv, "test two families for equivalence")
    sp.add_argument("modulus")
    sp.add_argument("first")
    sp.add_argument("second")
    sp = add("feasible", cmd_feasible, "list feasible parameter sets")
    sp.add_argument("--vmax", type=int, required=True)
    sp = add("search", cmd_search, "genetic search for a family")
    sp.add_argument("--params", required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--pop", type=int, default=SearchConfig.population_size)
    sp.add_argument("--gens", type=int, default=SearchConfig.max_generations)
    sp.add_argument("--restarts", type=int, default=SearchConfig.restarts)
    sp.add_argument("--islands", type=int, default=1)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--time-limit", type=float, default=None)
    sp.add_argument("--emit", choices=("normal", "raw"), default="normal")
    sp = add("classify", cmd_classify, "type tags of a parameter set")
    sp.add_argument("params")
    sp = add("pacf", cmd_pacf, "autocorrelation of one sequence or the sum over a pair")
    sp.add_argument("sequences", nargs="+")
    sp.add_argument("--aperiodic", action="store_true", help="non-periodic (NACF) instead")
    sp = add("golay2sds", cmd_golay2sds, "family from a pair of +/- sequences")
    sp.add_argument("first")
    sp.add_argument("second")
    sp = add("bibd", cmd_bibd, "develop an equal-size family into a 2-design")
    sp.add_argument("family", nargs="+")
    sp = add("corpus-check", cmd_corpus_check, "verify the tabulated families")
    sp.add_argument("--data", default=None, help="data directory (default: $SDS_DATA_DIR or bundled)")
    sp.add_argument("--deep-equiv", action="store_true")
    sp.add_argument("--workers", type=int, default=1)
    return p


_SEQ = re.compile(r"[+\-,;]+")


def _protect_sequences(argv: list[str]) -> list[str]:
    # '+/-' strings beginning with '-' would be read as options.
    if not argv or argv[0] not in ("pacf", "golay2sds") or "--" in argv:
        return argv
    opts = [t for t in argv[1:] if not _SEQ.fullmatch(t)]
    seqs = [t for t in argv[1:] if _SEQ.fullmatch(t)]
    return [argv[0], *opts, "--", *seqs]


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = _protect_sequences(list(sys.argv[1:] if argv is None else argv))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    args.json = getattr(args, "json", False)
    out: list = []
    try:
        code = args.func(args, out)
    except NotAnSDSError as exc:
        if args.json:
            out.append({"error": "not-sds", "message": str(exc)})
        else:
            out.append(f"not-sds: {exc}")
        code = EXIT_NEGATIVE
    except (UsageError, SDSError, ValueError) as exc:
        print(f"sdsfam: error: {exc}", file=stderr)
        return EXIT_USAGE
    for item in out:
        print(json.dumps(item, sort_keys=True) if args.json else item, file=stdout)
    return code


def main() -> None:
    sys.exit(run())
