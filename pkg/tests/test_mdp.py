import random
from fractions import Fraction

import pytest

from gamesynth import (
    ADAM,
    EVE,
    Arena,
    RandomizedMemorylessStrategy,
    SupportViolation,
    chain_expected_mp,
    enumerate_strategies,
    expected_mp,
    induce_chain,
    memoryless,
    optimal_expectation,
    solve_mp_game,
    stationary_distribution,
)
from gamesynth.mdp import bottom_components, chain_from_rows, component_gain

from conftest import random_arena, random_rnd
from oracles import sympy_gain


def random_chain(rng, n_max=8):
    n = rng.randint(1, n_max)
    trans, weight = {}, {}
    for v in range(n):
        succ = rng.sample(range(n), rng.randint(1, min(3, n)))
        raw = [rng.randint(1, 5) for _ in succ]
        trans[v] = {u: Fraction(c, sum(raw)) for u, c in zip(succ, raw)}
        for u in succ:
            weight[(v, u)] = Fraction(rng.randint(-5, 5), rng.choice([1, 2]))
    return chain_from_rows(trans, weight, 0)


class TestRandomizedStrategy:
    def test_drops_zero_entries(self):
        r = RandomizedMemorylessStrategy({3: {1: "1", 2: "0"}})
        assert r.dist == {3: {1: 1}}

    def test_must_sum_to_one(self):
        with pytest.raises(ValueError):
            RandomizedMemorylessStrategy({3: {1: "1/2", 2: "1/3"}})
        with pytest.raises(ValueError):
            RandomizedMemorylessStrategy({3: {1: "3/2", 2: "-1/2"}})

    def test_support_violation(self, arena_mp):
        with pytest.raises(SupportViolation):
            RandomizedMemorylessStrategy({3: {3: 1}}).check(arena_mp)
        with pytest.raises(SupportViolation):
            RandomizedMemorylessStrategy({1: {1: 1}, 3: {1: 1}}).check(arena_mp)
        with pytest.raises(SupportViolation):
            RandomizedMemorylessStrategy({}).check(arena_mp)


class TestInducedChain:
    def test_sigma_exp_chain(self, arena_mp, rnd_mp, sigma_exp):
        chain = induce_chain(arena_mp, sigma_exp, rnd_mp)
        assert len(chain.nodes) == 3
        assert chain.transition[(3, 0)] == {(1, 0): Fraction(9, 10), (2, 0): Fraction(1, 10)}
        assert chain.transition[(1, 0)] == {(2, 0): 1}

    def test_sigma_wc_chain(self, arena_mp, rnd_mp, sigma_wc):
        chain = induce_chain(arena_mp, sigma_wc, rnd_mp)
        assert chain.nodes == ((1, 0),)
        assert chain.transition[(1, 0)] == {(1, 0): 1}

    def test_degenerate_distribution(self, arena_mp, sigma_exp):
        chain = induce_chain(arena_mp, sigma_exp, RandomizedMemorylessStrategy({3: {1: 1}}))
        assert all(len(row) == 1 for row in chain.transition.values())
        assert chain_expected_mp(chain) == 2

    def test_rows_sum_to_one(self):
        rng = random.Random(50)
        for _ in range(50):
            arena = random_arena(rng)
            rnd = random_rnd(rng, arena)
            for sigma in list(enumerate_strategies(arena, EVE, 2))[:5]:
                chain = induce_chain(arena, sigma, rnd)
                for v, row in chain.transition.items():
                    assert sum(row.values()) == 1
                    if arena.owner[v[0]] is EVE:
                        assert list(row.values()) == [1]


class TestExpectation:
    def test_fixture_value(self, arena_mp, rnd_mp, sigma_exp):
        chain = induce_chain(arena_mp, sigma_exp, rnd_mp)
        [comp] = bottom_components(chain)
        pi = stationary_distribution(chain, comp)
        assert pi == {(1, 0): Fraction(9, 29), (2, 0): Fraction(10, 29), (3, 0): Fraction(10, 29)}
        assert chain_expected_mp(chain) == Fraction(54, 29)
        assert chain_expected_mp(chain, method="elimination") == Fraction(54, 29)
        assert sympy_gain(chain) == Fraction(54, 29)

    def test_sigma_wc(self, arena_mp, rnd_mp, sigma_wc):
        assert expected_mp(arena_mp, sigma_wc, rnd_mp) == 1

    def test_two_cycle(self):
        chain = chain_from_rows({0: {1: 1}, 1: {0: 1}}, {(0, 1): 3, (1, 0): "1/2"}, 0)
        assert chain_expected_mp(chain) == Fraction(7, 4)

    def test_random_chains(self):
        """200 random chains: stationary vectors are exact probability vectors,
        expectations lie within the weight range, both gain routes and sympy
        agree."""
        rng = random.Random(20261014)
        for i in range(200):
            chain = random_chain(rng)
            for comp in bottom_components(chain):
                pi = stationary_distribution(chain, comp)
                assert sum(pi.values()) == 1
                assert all(p >= 0 for p in pi.values())
                assert component_gain(chain, comp, "linear") == component_gain(chain, comp, "elimination")
            val = chain_expected_mp(chain)
            ws = list(chain.step_weight.values())
            assert min(ws) <= val <= max(ws)
            if i < 40:
                assert val == sympy_gain(chain)

    def test_large_chain_routes_agree(self):
        rng = random.Random(51)
        n = 90
        trans = {v: {(v + 1) % n: Fraction(2, 3), rng.randrange(n): Fraction(1, 3)} for v in range(n)}
        for v, row in trans.items():
            if len(row) == 1:
                trans[v] = {next(iter(row)): Fraction(1)}
        weight = {(v, u): Fraction(rng.randint(-3, 3)) for v in trans for u in trans[v]}
        chain = chain_from_rows(trans, weight, 0)
        assert chain_expected_mp(chain, "linear") == chain_expected_mp(chain, "elimination")


class TestOptimalExpectation:
    def test_fixture_instance(self, arena_mp, rnd_mp):
        value, sigma = optimal_expectation(arena_mp, rnd_mp)
        assert value == Fraction(54, 29)
        assert sigma.choices() == {1: 2, 2: 3}

    def test_adam_always_stays(self, arena_mp):
        value, sigma = optimal_expectation(arena_mp, RandomizedMemorylessStrategy({3: {2: 1}}))
        assert value == 1
        assert sigma.choices()[1] == 1

    def test_no_choice(self):
        arena = Arena.build({0: EVE, 1: ADAM}, [(0, 1, 2), (1, 0, 0), (1, 1, 5)], 0)
        rnd = RandomizedMemorylessStrategy({1: {0: "1/2", 1: "1/2"}})
        value, sigma = optimal_expectation(arena, rnd)
        # stationary vector (1/3, 2/3); step rewards 2 and 5/2
        assert value == Fraction(7, 3)
        assert value == sympy_gain(induce_chain(arena, memoryless(arena, EVE), rnd))

    def test_against_enumeration(self):
        rng = random.Random(52)
        for _ in range(120):
            arena = random_arena(rng, n_max=5)
            rnd = random_rnd(rng, arena)
            value, sigma = optimal_expectation(arena, rnd)
            listed = [expected_mp(arena, s, rnd) for s in enumerate_strategies(arena, EVE, 1)]
            assert value == max(listed)
            assert value == expected_mp(arena, sigma, rnd)
            assert value >= solve_mp_game(arena).value[arena.initial]
