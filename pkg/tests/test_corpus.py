import pytest

from sdsfam.canon import normal_form
from sdsfam.corpus import (
    CorpusReport,
    data_dir,
    load_census_targets,
    load_corpus,
    parse_record,
    read_records,
    render_record,
    verify_corpus,
)
from sdsfam.diffcheck import ParameterSet, enumerate_feasible
from sdsfam.errors import ParseError

NEWLY_SETTLED = [
    "(45;18,10;9)", "(45;22,22;21)", "(47;21,12;12)", "(47;19,15;12)",
    "(47;22,14;14)", "(48;20,10;10)", "(48;24,4;12)", "(50;25,20;20)",
]
# The only equal-size row printed in lex-descending block order.
PRINTED_REVERSED = {"(39;19,19;18)"}


def test_parse_examples():
    r = parse_record("(5;2,2;1) | {0,1} {0,2} | JS")
    assert r.status == "family" and r.family.as_tuples() == ((0, 1), (0, 2)) and r.tag == "JS"
    r = parse_record("(14;5,3;2) | None | DZ1")
    assert r.status == "none" and r.family is None
    r = parse_record("(43;9,4;2) | ? | -")
    assert r.status == "open" and r.family is None
    r = parse_record("(31;15,15;14) | external(31) | DO")
    assert r.status == "external" and r.count == 31


@pytest.mark.parametrize(
    "line,column",
    [
        ("(5;2,2;1) {0,1} {0,2} | JS", 1),
        ("(5;2,2) | {0,1} {0,2} | JS", 1),
        ("(5;2,2;1) | {0,1} x{0,2} | JS", 19),
        ("(5;2,2;1) | {0,1} {0,2,3} | JS", 13),
    ],
)
def test_parse_errors_have_columns(line, column):
    with pytest.raises(ParseError) as exc:
        parse_record(line)
    assert exc.value.column == column


def test_round_trip_whole_dataset():
    base = data_dir()
    for f in sorted(base.glob("table*.txt")):
        for line in f.read_text(encoding="utf-8").splitlines():
            if line.strip() and not line.startswith("#"):
                assert render_record(parse_record(line)).split() == line.split()


def test_completeness_counts(corpus):
    by_table = {}
    for r in corpus:
        by_table.setdefault(r.source_table, set()).add(r.params)
    assert len([r for r in corpus if r.source_table == 1]) == 14
    assert {t: len(by_table[t]) for t in (3, 4, 5, 6)} == {3: 30, 4: 45, 5: 63, 6: 89}
    feasible = set(enumerate_feasible(50))
    for t in (3, 4, 5, 6):
        assert by_table[t] <= feasible
    assert by_table[3] | by_table[4] | by_table[5] | by_table[6] == feasible


def test_newly_settled_sets_have_families(corpus):
    with_family = {str(r.params) for r in corpus if r.status == "family"}
    assert set(NEWLY_SETTLED) <= with_family


def test_census_targets():
    targets = dict((str(p), c) for p, c in load_census_targets())
    assert targets["(9;3,2;1)"] == 1 and targets["(13;4,4;2)"] == 2 and targets["(19;7,6;4)"] == 8


def test_verify_corpus_report(corpus):
    rep = verify_corpus(corpus)
    assert rep.total == len(corpus)
    assert rep.verified <= rep.family_records
    assert rep.equivalence_duplicates == []
    assert rep.normal_form_fixpoints == rep.verified
    assert rep.non_unique == []
    # Everything that fails is a non-SDS row; none is a normal-form failure.
    assert all(f.reason == "not-sds" and f.witness for f in rep.failures)


def test_printed_order_fixpoint(verified_two_block):
    for r in verified_two_block:
        rep = normal_form(r.family).representative
        if str(r.params) in PRINTED_REVERSED:
            assert sorted(rep.as_tuples()) == sorted(r.family.as_tuples())
        else:
            assert rep == r.family, render_record(r)


def test_duplicates_are_flagged():
    # Scaling only the second block is not a group move: {0,2,8,12} lands in
    # the class of ({0,1,4,6},{0,2,3,7}), not of the first family.
    recs = read_records(
        [
            "(13;4,4;2) | {0,1,4,6} {0,1,4,6} | DS",
            "(13;4,4;2) | {0,1,4,6} {0,2,3,7} | X",
            "(13;4,4;2) | {0,1,4,6} {0,2,8,12} | Y",
            "(13;4,4;2) | {0,2,8,12} {0,2,8,12} | Z",
        ]
    )
    rep = verify_corpus(recs)
    assert rep.equivalence_duplicates == [(0, 3), (1, 2)]
    assert rep.verified == 4 and rep.normal_form_fixpoints == 2
    assert verify_corpus(recs, deep_equiv=True).equivalence_duplicates == [(0, 3), (1, 2)]


def test_deep_pass_crosses_parameter_sets():
    # Complementing the first block gives parameters (13;9,4;7) but the same class.
    recs = read_records(
        ["(13;4,4;2) | {0,1,4,6} {0,2,3,7} | A", "(13;9,4;7) | {2,3,5,7,8,9,10,11,12} {0,2,3,7} | B"]
    )
    assert verify_corpus(recs).equivalence_duplicates == []
    assert verify_corpus(recs, deep_equiv=True).equivalence_duplicates == [(0, 1)]


def test_empty_dataset():
    assert verify_corpus([]) == CorpusReport()


def test_data_dir_override(tmp_path, monkeypatch):
    (tmp_path / "table3.txt").write_text("(5;2,2;1) | {0,1} {0,2} | JS\n", encoding="utf-8")
    monkeypatch.setenv("SDS_DATA_DIR", str(tmp_path))
    recs = load_corpus(tables=(3,))
    assert len(recs) == 1 and recs[0].params == ParameterSet(5, (2, 2), 1)
