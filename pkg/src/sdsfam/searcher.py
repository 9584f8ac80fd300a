"""Memetic genetic search for two-block difference families.

Individuals are tuples of fixed-size index sets.  The objective is the
squared deviation of the summed difference table from the target index,

    fitness = sum_{a=1}^{v-1} (N(a) - lambda)^2,

which is zero exactly on difference families with that index.  Every
offspring is refined by best-improvement descent over single-element swaps
(remove one element of a block, insert a non-member), whose fitness changes
are evaluated incrementally from the deviation vector.

Randomness comes from numpy's PCG64 generator seeded through SeedSequence;
each island gets its own spawned stream, so runs are reproducible across
platforms and independent of the number of worker processes.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .diffcheck import Family, ParameterSet, is_feasible, verify_sds
from .errors import InfeasibleParametersError
from .zmod import Block

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SearchConfig:
    population_size: int = 64
    max_generations: int = 200
    mutation_rate: float = 0.3
    crossover_rate: float = 0.9
    local_search_budget: int = 64
    restarts: int = 10
    rng_seed: int = 0
    stall_generations: int = 20
    islands: int = 1
    migration_interval: int = 5
    workers: int = 1
    time_limit: float | None = None

    def __post_init__(self):
        for name in ("mutation_rate", "crossover_rate"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {p}")
        if self.population_size < 2:
            raise ValueError("population_size must be >= 2")
        if self.islands < 1:
            raise ValueError("islands must be >= 1")


@dataclass
class SearchStats:
    generations: int = 0
    evaluations: int = 0
    best_fitness: int | None = None
    restarts_used: int = 0
    elapsed: float = 0.0
    island: int | None = None


def _diff_counts(v, blocks):
    n = np.zeros(v, dtype=np.int64)
    for b in blocks:
        x = np.asarray(b, dtype=np.int64)
        if x.size:
            n += np.bincount((x[None, :] - x[:, None]).ravel() % v, minlength=v)
    return n


def fitness(family: Family, lam: int) -> int:
    """Squared deviation of the summed difference table from ``lam`` off zero."""
    dev = _diff_counts(family.v, family.as_tuples())[1:] - lam
    return int((dev * dev).sum())


class State:
    """Mutable search individual with its deviation vector D = N - lambda (D[0] = 0)."""

    __slots__ = ("v", "lam", "blocks", "dev", "fit")

    def __init__(self, v, lam, blocks):
        self.v, self.lam = v, lam
        self.blocks = [np.array(sorted(b), dtype=np.int64) for b in blocks]
        dev = _diff_counts(v, self.blocks) - lam
        dev[0] = 0
        self.dev = dev
        self.fit = int((dev * dev).sum())

    def family(self) -> Family:
        return Family(self.v, tuple(Block(self.v, tuple(int(x) for x in b)) for b in self.blocks))

    def key(self):
        """Hash key invariant under per-block translation (which preserves fitness)."""
        out = []
        for b in self.blocks:
            b = b.tolist()
            out.append(min(tuple(sorted((x - x0) % self.v for x in b)) for x0 in b) if b else ())
        return tuple(out)

    def copy(self):
        s = State.__new__(State)
        s.v, s.lam, s.fit = self.v, self.lam, self.fit
        s.blocks = [b.copy() for b in self.blocks]
        s.dev = self.dev.copy()
        return s


def swap_delta(state: State, i: int, x: int, y: int) -> int:
    """Fitness change from replacing x by y in block i; O(k) scalar version."""
    v, dev = state.v, state.dev
    change: dict[int, int] = {}
    for z in state.blocks[i].tolist():
        if z == x:
            continue
        for a, c in (((x - z) % v, -1), ((z - x) % v, -1), ((y - z) % v, 1), ((z - y) % v, 1)):
            change[a] = change.get(a, 0) + c
    delta = 0
    for a, c in change.items():
        if a:
            d = int(dev[a])
            delta += (d + c) ** 2 - d * d
    return delta


def apply_swap(state: State, i: int, x: int, y: int) -> None:
    v = state.v
    b = state.blocks[i]
    rest = b[b != x]
    for w, c in ((x, -1), (y, 1)):
        np.add.at(state.dev, (w - rest) % v, c)
        np.add.at(state.dev, (rest - w) % v, c)
    state.dev[0] = 0
    state.blocks[i] = np.sort(np.append(rest, y))
    state.fit = int((state.dev * state.dev).sum())


def neighbourhood_deltas(state: State, i: int):
    """Fitness change of every swap in block i.

    Returns (members, outsiders, delta) with delta[p, q] the change for
    replacing members[p] by outsiders[q].
    """
    v, dev = state.v, state.dev
    b = state.blocks[i]
    k = b.size
    mask = np.ones(v, dtype=bool)
    mask[b] = False
    out = np.nonzero(mask)[0]
    if k == 0 or out.size == 0:
        return b, out, np.zeros((k, out.size), dtype=np.int64)
    # rest[p] = block without its p-th element, shape (k, k-1)
    idx = np.arange(k)
    rest = np.stack([np.delete(b, p) for p in idx]) if k > 1 else np.zeros((k, 0), dtype=np.int64)
    npairs = k * out.size
    rows = np.repeat(np.arange(npairs), 4 * (k - 1))
    xs = np.repeat(b, out.size)[:, None]
    ys = np.tile(out, k)[:, None]
    rs = np.repeat(rest, out.size, axis=0)
    pos = np.concatenate([(xs - rs) % v, (rs - xs) % v, (ys - rs) % v, (rs - ys) % v], axis=1)
    sgn = np.concatenate([-np.ones_like(rs), -np.ones_like(rs), np.ones_like(rs), np.ones_like(rs)], axis=1)
    delta_vec = np.zeros((npairs, v), dtype=np.int64)
    np.add.at(delta_vec, (rows, pos.ravel()), sgn.ravel())
    delta_vec[:, 0] = 0
    new = dev[None, :] + delta_vec
    delta = (new * new).sum(axis=1) - int((dev * dev).sum())
    return b, out, delta.reshape(k, out.size)


@dataclass(frozen=True)
class Candidate:
    family: Family
    fitness: int

    @classmethod
    def of(cls, family: Family, lam: int) -> "Candidate":
        return cls(family, fitness(family, lam))


def local_search(start: Candidate, lam: int, budget: int, rng: np.random.Generator) -> Candidate:
    """Best-improvement swap descent from ``start`` with at most ``budget`` moves."""
    s, _ = _descend(State(start.family.v, lam, start.family.as_tuples()), budget, rng)
    return Candidate(s.family(), s.fit)


def _descend(start: State, budget: int, rng: np.random.Generator) -> tuple[State, int]:
    """Best-improvement swap descent on a State.  Returns (final state, swap evaluations)."""
    s = start.copy()
    evals = 0
    for _ in range(budget):
        if s.fit == 0:
            break
        best = 0
        moves = []
        for i in range(len(s.blocks)):
            mem, out, delta = neighbourhood_deltas(s, i)
            evals += delta.size
            if delta.size == 0:
                continue
            m = int(delta.min())
            if m < best:
                best, moves = m, []
            if m == best and m < 0:
                for p, q in zip(*np.nonzero(delta == m)):
                    moves.append((i, int(mem[p]), int(out[q])))
        if not moves:
            break
        i, x, y = moves[int(rng.integers(len(moves)))]
        apply_swap(s, i, x, y)
    return s, evals


def _random_state(v, lam, sizes, rng):
    return State(v, lam, [rng.choice(v, size=k, replace=False) for k in sizes])


def _crossover(a: State, b: State, rng) -> State:
    blocks = []
    for x, y in zip(a.blocks, b.blocks):
        k = x.size
        both = np.intersect1d(x, y)
        pool = np.setxor1d(x, y)
        # Uniform set crossover: keep the common elements, fill from the rest at random.
        take = rng.choice(pool, size=k - both.size, replace=False) if k > both.size else pool[:0]
        blocks.append(np.concatenate([both, take]))
    return State(a.v, a.lam, blocks)


def _mutate(s: State, rng) -> None:
    i = int(rng.integers(len(s.blocks)))
    b = s.blocks[i]
    if b.size == 0 or b.size == s.v:
        return
    x = int(rng.choice(b))
    mask = np.ones(s.v, dtype=bool)
    mask[b] = False
    y = int(rng.choice(np.nonzero(mask)[0]))
    apply_swap(s, i, x, y)


def _tournament(pop, rng, size=3):
    picks = rng.integers(len(pop), size=size)
    return min((pop[int(p)] for p in picks), key=lambda s: s.fit)


@dataclass
class Island:
    index: int
    v: int
    lam: int
    sizes: tuple[int, ...]
    config: SearchConfig
    rng: np.random.Generator
    population: list = field(default_factory=list)
    generation_in_run: int = 0
    stall: int = 0
    best_in_run: int | None = None
    stats: SearchStats = field(default_factory=SearchStats)
    found: Family | None = None
    exhausted: bool = False

    def _refine(self, s):
        s, ev = _descend(s, self.config.local_search_budget, self.rng)
        self.stats.evaluations += ev + 1
        return s

    def _check(self, s) -> bool:
        if s.fit:
            return False
        fam = s.family()
        rep = verify_sds(fam)
        if rep.is_sds and rep.lam == self.lam:
            self.found = fam
            return True
        return False

    def _note_best(self, fit):
        if self.stats.best_fitness is None or fit < self.stats.best_fitness:
            self.stats.best_fitness = fit

    def _start_run(self):
        self.population, seen = [], set()
        tries = 0
        while len(self.population) < self.config.population_size and tries < 4 * self.config.population_size:
            tries += 1
            s = self._refine(_random_state(self.v, self.lam, self.sizes, self.rng))
            self._note_best(s.fit)
            if self._check(s):
                return
            k = s.key()
            if k not in seen:
                seen.add(k)
                self.population.append(s)
        self.generation_in_run = 0
        self.stall = 0
        self.best_in_run = min(s.fit for s in self.population)

    def step(self):
        """One generation; returns True when a family was found."""
        cfg, rng = self.config, self.rng
        if not self.population:
            self._start_run()
            if self.found:
                return True
        offspring = []
        for _ in range(cfg.population_size):
            a = _tournament(self.population, rng)
            if rng.random() < cfg.crossover_rate:
                child = _crossover(a, _tournament(self.population, rng), rng)
            else:
                child = a.copy()
            if rng.random() < cfg.mutation_rate:
                _mutate(child, rng)
            child = self._refine(child)
            self._note_best(child.fit)
            if self._check(child):
                self.stats.generations += 1
                return True
            offspring.append(child)
        merged, seen = [], set()
        for s in sorted(self.population + offspring, key=lambda s: s.fit):
            k = s.key()
            if k not in seen:
                seen.add(k)
                merged.append(s)
            if len(merged) == cfg.population_size:
                break
        self.population = merged
        self.stats.generations += 1
        self.generation_in_run += 1
        best = merged[0].fit
        if best < self.best_in_run:
            self.best_in_run, self.stall = best, 0
        else:
            self.stall += 1
        if self.generation_in_run >= cfg.max_generations or self.stall >= cfg.stall_generations:
            if self.stats.restarts_used >= cfg.restarts:
                self.exhausted = True
            else:
                self.stats.restarts_used += 1
                self.population = []
        return False

    def run_epoch(self, generations: int, deadline: float | None):
        for _ in range(generations):
            if self.exhausted or self.found:
                break
            if deadline is not None and time.monotonic() > deadline:
                break
            if self.step():
                break
        return self

    def immigrant(self, s: State):
        if not self.population:
            return
        keys = {p.key() for p in self.population}
        if s.key() in keys:
            return
        worst = max(range(len(self.population)), key=lambda j: self.population[j].fit)
        self.population[worst] = s.copy()


def _run_epoch(args):
    island, generations, deadline = args
    return island.run_epoch(generations, deadline)


def search(params: ParameterSet, config: SearchConfig = SearchConfig()) -> tuple[Family | None, SearchStats]:
    """Look for a two-block SDS with the given parameters.

    Returns the first verified family found (or None) and run statistics.
    """
    if len(params.sizes) != 2 or not is_feasible(params):
        raise InfeasibleParametersError(f"{params} is not a feasible two-block parameter set")
    t0 = time.monotonic()
    deadline = None if config.time_limit is None else t0 + config.time_limit
    streams = np.random.SeedSequence(config.rng_seed).spawn(config.islands)
    islands = [
        Island(i, params.v, params.lam, params.sizes, config, np.random.Generator(np.random.PCG64(ss)))
        for i, ss in enumerate(streams)
    ]
    epoch = config.migration_interval if config.islands > 1 else config.max_generations * (config.restarts + 1)
    pool = ProcessPoolExecutor(config.workers) if config.workers > 1 and config.islands > 1 else None
    try:
        while True:
            jobs = [(isl, epoch, deadline) for isl in islands]
            islands = list(pool.map(_run_epoch, jobs)) if pool else [_run_epoch(j) for j in jobs]
            winner = next((isl for isl in islands if isl.found is not None), None)
            if winner is not None:
                return winner.found, _merge_stats(islands, winner.index, t0)
            if all(isl.exhausted for isl in islands):
                break
            if deadline is not None and time.monotonic() > deadline:
                log.info("time limit reached after %.1fs", time.monotonic() - t0)
                break
            if len(islands) > 1:
                bests = [min(isl.population, key=lambda s: s.fit) if isl.population else None for isl in islands]
                for j, isl in enumerate(islands):
                    b = bests[j - 1]
                    if b is not None:
                        isl.immigrant(b)
    finally:
        if pool:
            pool.shutdown(cancel_futures=True)
    return None, _merge_stats(islands, None, t0)


def _merge_stats(islands, winner, t0):
    st = SearchStats(island=winner, elapsed=time.monotonic() - t0)
    st.generations = sum(i.stats.generations for i in islands)
    st.evaluations = sum(i.stats.evaluations for i in islands)
    st.restarts_used = sum(i.stats.restarts_used for i in islands)
    fits = [i.stats.best_fitness for i in islands if i.stats.best_fitness is not None]
    st.best_fitness = 0 if winner is not None else (min(fits) if fits else None)
    return st
