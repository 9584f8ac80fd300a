import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from sdsfam.canon import GroupElement, dagger_applies
from sdsfam.corpus import load_corpus
from sdsfam.diffcheck import make_family, verify_sds
from sdsfam.zmod import units

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def corpus():
    return load_corpus()


@pytest.fixture(scope="session")
def corpus_families(corpus):
    return [r for r in corpus if r.status == "family"]


@pytest.fixture(scope="session")
def verified_two_block(corpus_families):
    return [r for r in corpus_families if r.family.m == 2 and verify_sds(r.family).is_sds]


def small_sds_seeds(v_max=15):
    """Verified two-block corpus families with v <= v_max."""
    return [
        r.family
        for r in load_corpus(tables=(3,))
        if r.status == "family" and r.family.v <= v_max and verify_sds(r.family).is_sds
    ]


def random_group_element(family, rng: random.Random) -> GroupElement:
    v, m = family.v, family.m
    return GroupElement(
        multiplier=rng.choice(units(v)),
        dagger=dagger_applies(family) and rng.random() < 0.5,
        negations=tuple(rng.choice((1, -1)) for _ in range(m)),
        complements=tuple(rng.random() < 0.5 for _ in range(m)),
        translations=tuple(rng.randrange(v) for _ in range(m)),
    )


@st.composite
def families(draw, v_min=2, v_max=20, m=2):
    v = draw(st.integers(v_min, v_max))
    blocks = [draw(st.sets(st.integers(0, v - 1), max_size=v)) for _ in range(m)]
    return make_family(v, [sorted(b) for b in blocks])


# -- acceptance summary: one line per criterion ---------------------------------

_CRITERIA: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when not in ("setup", "call"):
        return
    n, title = mark.args
    if rep.failed or rep.when == "call":
        prev = _CRITERIA.get(n, (title, "PASS"))[1]
        status = "FAIL" if rep.failed or prev == "FAIL" else "PASS"
        _CRITERIA[n] = (title, status)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        title, status = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:2d} {status}: {title}")
