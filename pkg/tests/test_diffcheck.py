import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sdsfam.diffcheck import (
    ParameterSet,
    difference_table,
    enumerate_feasible,
    family_table,
    is_feasible,
    make_family,
    parse_family,
    verify_sds,
)
from sdsfam.zmod import make_block

from conftest import families


def brute_table(v, blocks):
    counts = [0] * v
    for b in blocks:
        for x in b:
            for y in b:
                counts[(y - x) % v] += 1
    return counts


def test_difference_table_examples():
    assert difference_table(make_block(7, [0, 1, 3])).counts == (3, 1, 1, 1, 1, 1, 1)
    assert difference_table(make_block(5, [])).counts == (0,) * 5
    assert difference_table(make_block(5, [0, 1])).counts == (2, 1, 0, 0, 1)


def test_family_table_examples():
    assert family_table(make_family(5, [[0, 1], [0, 2]])).counts == (4, 1, 1, 1, 1)
    assert family_table(make_family(5, [[0, 1], [0, 1]])).counts == (4, 2, 0, 0, 2)
    b = make_block(7, [0, 1, 3])
    assert family_table(make_family(7, [b])).counts == difference_table(b).counts


def test_verify_examples():
    rep = verify_sds(make_family(5, [[0, 1], [0, 2]]))
    assert rep.is_sds and rep.lam == 1 and rep.parameters.n == 3 and rep.witness is None
    rep = verify_sds(make_family(5, [[0, 1], [0, 1]]))
    assert not rep.is_sds and rep.witness == (2, 0) and rep.lam is None
    rep = verify_sds(make_family(15, [[0, 1, 3, 5, 7, 8], [0, 1, 4, 10]]))
    assert rep.is_sds and rep.lam == 3 and rep.parameters.n == 7


def test_feasibility_examples():
    assert is_feasible(ParameterSet(18, (9, 6), 6))
    assert is_feasible(ParameterSet(5, (2, 2), 1))
    assert not is_feasible(ParameterSet(10, (4, 4), 2))


def brute_feasible(v_max):
    out = []
    for v in range(4, v_max + 1):
        for r in range(2, v // 2 + 1):
            for s in range(2, r + 1):
                for lam in range(0, v):
                    if r * (r - 1) + s * (s - 1) == lam * (v - 1):
                        out.append((v, lam, r + s - lam, r, s))
    return sorted(out)


def test_census_against_brute_force():
    got = [(p.v, p.lam, p.n, *p.sizes) for p in enumerate_feasible(50)]
    assert got == brute_feasible(50)
    assert len(got) == 227
    assert len(enumerate_feasible(20)) == 30
    assert [str(p) for p in enumerate_feasible(5)] == ["(5;2,2;1)"]


def test_parameter_set_text():
    p = ParameterSet.parse("(19; 7,6 ;4)")
    assert str(p) == "(19;7,6;4)" and p.n == 9
    assert ParameterSet(19, (6, 7), 4) == p


def test_parse_family():
    f = parse_family(13, "{0,1,4,6} {0,2,3,7}")
    assert str(f) == "{0,1,4,6} {0,2,3,7}"
    with pytest.raises(ValueError):
        parse_family(13, "{0,1} junk")


@given(families(v_max=20, m=1))
def test_table_sum_and_symmetry(f):
    t = family_table(f).counts
    k = len(f.blocks[0])
    assert sum(t) == k * k and t[0] == k
    assert all(t[a] == t[(-a) % f.v] for a in range(f.v))


def test_verify_matches_brute_force_oracle():
    rng = random.Random(7)
    seen_sds = 0
    for _ in range(1000):
        v = rng.randint(2, 20)
        blocks = [rng.sample(range(v), rng.randint(0, v)) for _ in range(2)]
        t = brute_table(v, blocks)
        rep = verify_sds(make_family(v, blocks))
        assert rep.is_sds == (len(set(t[1:])) <= 1)
        if rep.is_sds:
            seen_sds += 1
            assert rep.lam == t[1 % v]
            ks = [len(b) for b in blocks]
            assert sum(k * (k - 1) for k in ks) == rep.lam * (v - 1)
        else:
            a, c = rep.witness
            assert c == t[a] != t[1] and all(t[b] == t[1] for b in range(1, a))
    assert seen_sds > 0
