import random
from fractions import Fraction

import pytest
from hypothesis import settings

from gamesynth import ADAM, EVE, Arena, RandomizedMemorylessStrategy, load_arena, load_automaton, memoryless
from gamesynth.fixtures import fixture_path

settings.register_profile("repo", derandomize=True, deadline=None, max_examples=60)
settings.load_profile("repo")


def fixture_file(name: str) -> str:
    return str(fixture_path(name))


@pytest.fixture(scope="session")
def mp_bundle():
    return load_arena(fixture_file("arena_mp.json"))


@pytest.fixture(scope="session")
def arena_mp(mp_bundle):
    return mp_bundle.arena


@pytest.fixture(scope="session")
def rnd_mp(mp_bundle):
    return mp_bundle.rnd


@pytest.fixture(scope="session")
def adm_bundle():
    return load_arena(fixture_file("arena_adm.json"))


@pytest.fixture(scope="session")
def arena_adm(adm_bundle):
    return adm_bundle.arena


@pytest.fixture(scope="session")
def obj_adm(adm_bundle):
    return adm_bundle.objective_pair


@pytest.fixture(scope="session")
def aut_word():
    return load_automaton(fixture_file("aut_word.json"))


@pytest.fixture
def sigma_wc(arena_mp):
    return memoryless(arena_mp, EVE, {1: 1, 2: 1})


@pytest.fixture
def sigma_exp(arena_mp):
    return memoryless(arena_mp, EVE, {1: 2, 2: 3})


def random_arena(rng: random.Random, n_max: int = 5, deg_max: int = 3, w: int = 5, owners=(EVE, ADAM)) -> Arena:
    """Total arena with 1..n_max states, out-degree 1..deg_max and integer
    weights in [-w, w]; states are 0..n-1 and 0 is initial."""
    n = rng.randint(1, n_max)
    owner = {s: rng.choice(owners) for s in range(n)}
    edges = []
    for s in range(n):
        for t in rng.sample(range(n), rng.randint(1, min(deg_max, n))):
            edges.append((s, t, rng.randint(-w, w)))
    return Arena.build(owner, edges, 0)


def random_memoryless(rng: random.Random, arena: Arena, player):
    return memoryless(arena, player, {s: rng.choice(arena.succ[s]) for s in arena.states_of(player)})


def random_rnd(rng, arena):
    dist = {}
    for s in arena.states_of(ADAM):
        succ = arena.succ[s]
        raw = [rng.randint(0, 4) for _ in succ]
        if sum(raw) == 0:
            raw[0] = 1
        total = sum(raw)
        dist[s] = {t: Fraction(c, total) for t, c in zip(succ, raw)}
    return RandomizedMemorylessStrategy(dist)


# PASS/FAIL lines recorded by test_acceptance.py, repeated in the summary
ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
