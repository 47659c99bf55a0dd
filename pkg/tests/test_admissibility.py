import random

import pytest

from gamesynth import (
    ADAM,
    EVE,
    BuchiObjective,
    ObjectivePair,
    admissible_strategies,
    assume_admissible_check,
    dominates,
    enumerate_strategies,
    memoryless,
    outcome_lasso,
    solve_buchi,
)
from gamesynth.admissibility import verify_win_hyp, win_hyp_solve

from conftest import random_arena


def random_objectives(rng, arena):
    states = list(arena.states)
    eve = rng.sample(states, rng.randint(0, len(states)))
    adam = rng.sample(states, rng.randint(0, len(states)))
    return ObjectivePair(BuchiObjective(eve), BuchiObjective(adam))


def visits_forever(lasso, target):
    return any(s in target for s in lasso.cycle)


def win_hyp_holds(lasso, obj):
    return visits_forever(lasso, obj.eve.target) or not visits_forever(lasso, obj.adam.target)


def strictly_better(arena, target, player, a, b, opponents):
    """``b`` dominates ``a`` against the listed opponent strategies."""
    wa = [visits_forever(outcome_lasso(arena, a, t) if player is EVE else outcome_lasso(arena, t, a), target)
          for t in opponents]
    wb = [visits_forever(outcome_lasso(arena, b, t) if player is EVE else outcome_lasso(arena, t, b), target)
          for t in opponents]
    return all(y >= x for x, y in zip(wa, wb)) and wa != wb


class TestWinHyp:
    def test_fixture_region(self, arena_adm, obj_adm):
        assert win_hyp_solve(arena_adm, obj_adm).region == frozenset(arena_adm.states)

    def test_fixture_strategies(self, arena_adm, obj_adm):
        assert verify_win_hyp(arena_adm, obj_adm, memoryless(arena_adm, EVE, {1: 5}))
        assert verify_win_hyp(arena_adm, obj_adm, memoryless(arena_adm, EVE, {1: 2, 3: 4}))
        assert not verify_win_hyp(arena_adm, obj_adm, memoryless(arena_adm, EVE, {1: 2, 3: 2}))

    def test_solver_strategy_verifies(self, arena_adm, obj_adm):
        assert verify_win_hyp(arena_adm, obj_adm, win_hyp_solve(arena_adm, obj_adm).strategy)

    def test_empty_adam_target(self, arena_adm):
        obj = ObjectivePair(BuchiObjective({4}), BuchiObjective(()))
        assert win_hyp_solve(arena_adm, obj).region == frozenset(arena_adm.states)

    def test_verify_against_memoryless_adversaries(self):
        # with sigma memoryless a bad play, if any, is a path to a simple
        # cycle, which a memoryless Adam strategy can follow
        rng = random.Random(90)
        for _ in range(120):
            arena = random_arena(rng)
            obj = random_objectives(rng, arena)
            for sigma in list(enumerate_strategies(arena, EVE, 1))[:6]:
                brute = all(win_hyp_holds(outcome_lasso(arena, sigma, t), obj)
                            for t in enumerate_strategies(arena, ADAM, 1))
                assert verify_win_hyp(arena, obj, sigma) == brute

    def test_region_against_enumeration(self):
        rng = random.Random(91)
        for _ in range(80):
            arena = random_arena(rng)
            obj = random_objectives(rng, arena)
            region = win_hyp_solve(arena, obj).region
            for s in arena.states:
                a = arena.with_initial(s)
                wins = any(verify_win_hyp(a, obj, sigma) for sigma in enumerate_strategies(a, EVE, 1))
                assert wins == (s in region)


class TestDominance:
    def test_fixture_dominated(self, arena_adm, obj_adm):
        low = memoryless(arena_adm, EVE, {1: 5})
        high = memoryless(arena_adm, EVE, {1: 2, 3: 4})
        v = dominates(arena_adm, obj_adm, EVE, low, high, 1)
        assert v.dominated and v.bound_used == 1
        assert v.witness_tau_better.choices() == {2: 3, 4: 3}
        assert not dominates(arena_adm, obj_adm, EVE, high, low, 1).dominated

    def test_verdict_persists_with_more_adversary_memory(self, arena_adm, obj_adm):
        low = memoryless(arena_adm, EVE, {1: 5})
        high = memoryless(arena_adm, EVE, {1: 2, 3: 4})
        for k in (1, 2, 3):
            assert dominates(arena_adm, obj_adm, EVE, low, high, k).dominated

    def test_wrong_player_rejected(self, arena_adm, obj_adm):
        with pytest.raises(ValueError):
            dominates(arena_adm, obj_adm, ADAM, memoryless(arena_adm, EVE), memoryless(arena_adm, EVE))

    @pytest.mark.parametrize("player", [EVE, ADAM])
    def test_strict_partial_order(self, arena_adm, obj_adm, player):
        strats = list(enumerate_strategies(arena_adm, player, 2))[:12]
        rel = {(i, j): dominates(arena_adm, obj_adm, player, a, b, 1).dominated
               for i, a in enumerate(strats) for j, b in enumerate(strats)}
        n = len(strats)
        for i in range(n):
            assert not rel[(i, i)]
            for j in range(n):
                if rel[(i, j)]:
                    assert not rel[(j, i)]
                    for k in range(n):
                        if rel[(j, k)]:
                            assert rel[(i, k)]

    def test_matches_outcome_comparison(self, arena_mp):
        obj = ObjectivePair(BuchiObjective({1}), BuchiObjective({3}))
        eve = list(enumerate_strategies(arena_mp, EVE, 1))
        adam = list(enumerate_strategies(arena_mp, ADAM, 1))
        for a in eve:
            for b in eve:
                expect = strictly_better(arena_mp, obj.eve.target, EVE, a, b, adam)
                assert dominates(arena_mp, obj, EVE, a, b, 1).dominated == expect


class TestAdmissible:
    def test_fixture_sets(self, arena_adm, obj_adm):
        eve = admissible_strategies(arena_adm, obj_adm, EVE, 1, 1)
        adam = admissible_strategies(arena_adm, obj_adm, ADAM, 1, 1)
        # state 5 has a single successor
        assert [s.choices() for s in eve] == [{1: 2, 3: 4, 5: 5}]
        assert [s.choices() for s in adam] == [{2: 3, 4: 3}]

    def test_fixture_aa(self, arena_adm, obj_adm):
        res = assume_admissible_check(arena_adm, obj_adm, 1, 1)
        assert res.holds
        assert res.witness.choices() == {1: 2, 3: 4, 5: 5}

    @pytest.mark.parametrize("bounds", [(1, 1), (2, 1), (1, 2), (2, 2)])
    def test_nonempty(self, arena_adm, obj_adm, bounds):
        for player in (EVE, ADAM):
            assert admissible_strategies(arena_adm, obj_adm, player, *bounds)

    def test_win_vectors_match_pairwise(self):
        rng = random.Random(92)
        for _ in range(25):
            arena = random_arena(rng, n_max=4)
            obj = random_objectives(rng, arena)
            player = rng.choice([EVE, ADAM])
            mine = list(enumerate_strategies(arena, player, 2))[:10]
            listed = set(admissible_strategies(arena, obj, player, 2, 1))
            full = list(enumerate_strategies(arena, player, 2))
            for s in mine:
                dominated = any(dominates(arena, obj, player, s, t, 1).dominated for t in full)
                assert (s in listed) == (not dominated)

    def test_aa_witness_wins_against_admissible_adam(self):
        rng = random.Random(93)
        checked = 0
        for _ in range(60):
            arena = random_arena(rng, n_max=4)
            obj = random_objectives(rng, arena)
            res = assume_admissible_check(arena, obj, 1, 1)
            if not res.holds:
                continue
            checked += 1
            assert res.witness in admissible_strategies(arena, obj, EVE, 1, 1)
            for tau in admissible_strategies(arena, obj, ADAM, 1, 1):
                assert visits_forever(outcome_lasso(arena, res.witness, tau), obj.eve.target)
        assert checked > 5

    def test_surely_winning_implies_aa(self):
        # a strategy that wins against everything is never dominated
        rng = random.Random(94)
        for _ in range(80):
            arena = random_arena(rng)
            obj = random_objectives(rng, arena)
            if arena.initial in solve_buchi(arena, obj.eve).region:
                assert assume_admissible_check(arena, obj, 1, 1).holds

    def test_eve_target_everything(self, arena_adm):
        obj = ObjectivePair(BuchiObjective(arena_adm.states), BuchiObjective({3}))
        assert assume_admissible_check(arena_adm, obj).holds
