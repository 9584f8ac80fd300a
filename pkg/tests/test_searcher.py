import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sdsfam.canon import ElementaryTransform as T, apply_transform, normal_form
from sdsfam.diffcheck import ParameterSet, make_family, verify_sds
from sdsfam.errors import InfeasibleParametersError
from sdsfam.searcher import (
    Candidate,
    SearchConfig,
    State,
    apply_swap,
    fitness,
    local_search,
    neighbourhood_deltas,
    search,
    swap_delta,
)
from sdsfam.zmod import units

from conftest import families


def test_fitness_examples():
    assert fitness(make_family(5, [[0, 1], [0, 1]]), 1) == 4
    assert fitness(make_family(5, [[0, 1], [0, 2]]), 1) == 0
    assert fitness(make_family(15, [[0, 1, 3, 5, 7, 8], [0, 1, 4, 10]]), 3) == 0


@given(families(v_max=15), st.integers(0, 6), st.randoms(use_true_random=False))
def test_fitness_invariant_under_size_preserving_maps(f, lam, rnd):
    base = fitness(f, lam)
    t = rnd.choice(
        [T.translate(rnd.randrange(2), rnd.randrange(f.v)), T.negate(rnd.randrange(2)), T.multiply(rnd.choice(units(f.v)))]
    )
    assert fitness(apply_transform(f, t), lam) == base


def test_incremental_delta_matches_recomputation():
    rng = random.Random(0)
    for _ in range(10_000):
        v = rng.randint(4, 30)
        ks = [rng.randint(1, v - 1) for _ in range(2)]
        lam = rng.randint(0, 6)
        s = State(v, lam, [rng.sample(range(v), k) for k in ks])
        i = rng.randrange(2)
        x = rng.choice(s.blocks[i].tolist())
        y = rng.choice([z for z in range(v) if z not in s.blocks[i]])
        before = s.fit
        d = swap_delta(s, i, x, y)
        apply_swap(s, i, x, y)
        assert s.fit - before == d
        assert s.fit == fitness(s.family(), lam)
        assert s.family().sizes == tuple(ks)


def test_neighbourhood_matches_scalar_delta():
    rng = random.Random(1)
    for _ in range(200):
        v = rng.randint(4, 20)
        s = State(v, rng.randint(0, 4), [rng.sample(range(v), rng.randint(1, v - 1)) for _ in range(2)])
        i = rng.randrange(2)
        mem, out, delta = neighbourhood_deltas(s, i)
        for p, x in enumerate(mem.tolist()):
            for q, y in enumerate(out.tolist()):
                assert delta[p, q] == swap_delta(s, i, x, y)


def test_local_search_trivial_cases():
    rng = np.random.default_rng(0)
    sds = Candidate.of(make_family(5, [[0, 1], [0, 2]]), 1)
    assert local_search(sds, 1, 50, rng) == sds
    bad = Candidate.of(make_family(5, [[0, 1], [0, 1]]), 1)
    assert local_search(bad, 1, 0, rng) == bad


def test_local_search_small_calibration():
    ok = 0
    for seed in range(100):
        rng = np.random.default_rng(seed)
        f = make_family(5, [rng.choice(5, 2, replace=False).tolist() for _ in range(2)])
        out = local_search(Candidate.of(f, 1), 1, 100, rng)
        assert out.fitness <= fitness(f, 1) and out.family.sizes == (2, 2)
        ok += out.fitness == 0
    assert ok >= 99


def test_search_finds_small_families():
    f, stats = search(ParameterSet.parse("(5;2,2;1)"))
    assert f is not None and verify_sds(f).lam == 1 and stats.best_fitness == 0
    f, _ = search(ParameterSet.parse("(13;4,4;2)"))
    nf = normal_form(f).representative.as_tuples()
    assert nf in {((0, 1, 4, 6), (0, 1, 4, 6)), ((0, 1, 4, 6), (0, 2, 3, 7))}


def test_search_none_when_no_family_exists():
    cfg = SearchConfig(population_size=16, max_generations=10, restarts=1, local_search_budget=20)
    f, stats = search(ParameterSet.parse("(14;5,3;2)"), cfg)
    assert f is None and stats.best_fitness > 0 and stats.restarts_used == 1


def test_search_infeasible():
    with pytest.raises(InfeasibleParametersError):
        search(ParameterSet(10, (4, 4), 2))


def test_search_deterministic_and_worker_independent():
    p = ParameterSet.parse("(19;7,6;4)")
    a = search(p, SearchConfig(rng_seed=11, islands=3))[0]
    b = search(p, SearchConfig(rng_seed=11, islands=3))[0]
    c = search(p, SearchConfig(rng_seed=11, islands=3, workers=2))[0]
    assert a == b == c
    assert search(p, SearchConfig(rng_seed=12))[0] == search(p, SearchConfig(rng_seed=12))[0]


def test_time_limit_stops_search():
    cfg = SearchConfig(population_size=16, restarts=1000, time_limit=0.5)
    f, stats = search(ParameterSet.parse("(14;5,3;2)"), cfg)
    assert f is None and stats.elapsed < 5


def test_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(mutation_rate=1.5)
    with pytest.raises(ValueError):
        SearchConfig(population_size=1)
