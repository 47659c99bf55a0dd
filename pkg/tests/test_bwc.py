import random
from fractions import Fraction

import pytest

from gamesynth import (
    ADAM,
    EVE,
    BwcCertificate,
    BwcInstance,
    CapExceeded,
    NotFound,
    SimConfig,
    bwc_synthesize,
    combined_strategy,
    enumerate_strategies,
    estimate_expected_mp,
    expected_mp,
    memoryless,
    outcome_lasso,
    worst_case_value_of,
)
from gamesynth.bwc import certificate_report, search_order

from conftest import random_arena, random_memoryless, random_rnd
from oracles import chain_of, min_cycle_mean_nx, product_of, sympy_gain


def walk(arena, sigma, rng, steps):
    """Random play consistent with ``sigma``: yields (state, memory label
    after observing it, next state)."""
    s, m = arena.initial, sigma.initial_memory
    for _ in range(steps):
        m2 = sigma.next_memory(m, s)
        t = sigma.move(m, s) if arena.owner[s] is EVE else rng.choice(arena.succ[s])
        yield s, sigma.labels[m2], t
        s, m = t, m2


class TestWorstCase:
    def test_fixture_strategies(self, arena_mp, sigma_exp, sigma_wc):
        assert worst_case_value_of(arena_mp, sigma_exp) == 0
        assert worst_case_value_of(arena_mp, sigma_wc) == 1

    def test_constant_weights(self):
        rng = random.Random(60)
        for _ in range(30):
            base = random_arena(rng)
            arena = base.map_weights(lambda w: Fraction(3, 2))
            sigma = random_memoryless(rng, arena, EVE)
            assert worst_case_value_of(arena, sigma) == Fraction(3, 2)

    def test_matches_cycle_enumeration(self):
        rng = random.Random(61)
        for _ in range(60):
            arena = random_arena(rng, n_max=4)
            for sigma in list(enumerate_strategies(arena, EVE, 2))[:4]:
                d, _ = product_of(arena, sigma)
                assert worst_case_value_of(arena, sigma) == min_cycle_mean_nx(d)


class TestCombinedStrategy:
    def test_k1_l1_shape(self, arena_mp, sigma_wc, sigma_exp):
        lam = Fraction(1, 3)
        strat = combined_strategy(arena_mp, sigma_wc, sigma_exp, lam, 1, 1)
        # memory: (phase, count, sum, previous state); with K = 1 sums are
        # never stored, so at most one label per phase and previous state
        assert strat.memory_size <= (1 + 1) * len(arena_mp.states) + 1
        rng = random.Random(62)
        prev = None
        for s, label, t in walk(arena_mp, strat, rng, 400):
            if prev is not None and prev[1][0] == "exp":
                w = arena_mp.weight(prev[0], s)
                assert (label[0] == "wc") == (w <= lam)
            if arena_mp.owner[s] is EVE:
                expect = sigma_exp.move(0, s) if label[0] == "exp" else sigma_wc.move(0, s)
                assert t == expect
            prev = (s, label)

    def test_threshold_below_all_weights_is_sigma_exp(self, arena_mp, sigma_wc, sigma_exp):
        strat = combined_strategy(arena_mp, sigma_wc, sigma_exp, -1, 1, 1)
        for tau in enumerate_strategies(arena_mp, ADAM, 2):
            assert outcome_lasso(arena_mp, strat, tau).normalized() == outcome_lasso(arena_mp, sigma_exp, tau)

    def test_long_blocks_rarely_switch(self, arena_mp, rnd_mp, sigma_wc, sigma_exp):
        strat = combined_strategy(arena_mp, sigma_wc, sigma_exp, Fraction(1, 3), 16, 1)
        # Adam sampled from the fixture distribution: the play almost never
        # spends time in the worst-case phase
        rng = random.Random(63)
        s, m = arena_mp.initial, 0
        wc_steps = 0
        for _ in range(5000):
            m2 = strat.next_memory(m, s)
            if strat.labels[m2][0] == "wc":
                wc_steps += 1
            if arena_mp.owner[s] is EVE:
                t = strat.move(m, s)
            else:
                t = 1 if rng.random() < 0.9 else 2
            s, m = t, m2
        assert wc_steps < 50

    def test_rejects_bad_parameters(self, arena_mp, sigma_wc, sigma_exp):
        with pytest.raises(ValueError):
            combined_strategy(arena_mp, sigma_wc, sigma_exp, 0, 0, 1)

    def test_expectation_nondecreasing_in_k(self, arena_mp, rnd_mp, sigma_wc, sigma_exp):
        for L in (1, 2, 4, 8, 16):
            vals = [
                expected_mp(arena_mp, combined_strategy(arena_mp, sigma_wc, sigma_exp, Fraction(1, 3), K, L), rnd_mp)
                for K in (1, 2, 4, 8, 16)
            ]
            assert vals == sorted(vals)


@pytest.fixture(scope="module")
def fixture_cert(mp_bundle):
    return bwc_synthesize(BwcInstance(mp_bundle.arena, mp_bundle.rnd, "1/3", "3/2"), (64, 64))


class TestSynthesis:
    def test_fixture_instance(self, fixture_cert):
        assert isinstance(fixture_cert, BwcCertificate)
        assert fixture_cert.worst_case > Fraction(1, 3)
        assert fixture_cert.expectation > Fraction(3, 2)
        assert fixture_cert.params == (3, 4)
        assert (fixture_cert.worst_case, fixture_cert.expectation) == (Fraction(3, 7), Fraction(57, 34))

    def test_independent_reverification(self, fixture_cert, arena_mp, rnd_mp):
        d, _ = product_of(arena_mp, fixture_cert.strategy)
        assert min_cycle_mean_nx(d) == fixture_cert.worst_case
        assert sympy_gain(chain_of(arena_mp, fixture_cert.strategy, rnd_mp)) == fixture_cert.expectation

    def test_first_in_search_order(self, arena_mp, rnd_mp, sigma_wc, sigma_exp, fixture_cert):
        for K, L in search_order((64, 64)):
            if (K, L) == fixture_cert.params:
                break
            strat = combined_strategy(arena_mp, sigma_wc, sigma_exp, Fraction(1, 3), K, L)
            assert worst_case_value_of(arena_mp, strat) <= Fraction(1, 3) or (
                expected_mp(arena_mp, strat, rnd_mp) <= Fraction(3, 2)
            )

    def test_monte_carlo_agreement(self, fixture_cert, arena_mp, rnd_mp):
        rep = estimate_expected_mp(arena_mp, fixture_cert.strategy, rnd_mp, SimConfig(10**6, 1, 42))
        assert abs(rep.mean - float(fixture_cert.expectation)) <= 0.05

    def test_worst_case_infeasible(self, arena_mp, rnd_mp):
        res = bwc_synthesize(BwcInstance(arena_mp, rnd_mp, 2, 3))
        assert isinstance(res, NotFound)
        assert res.witness["optimal_worst_case"] == 1
        assert res.witness["adam_strategy"].choices() == {3: 2}

    def test_expectation_infeasible(self, arena_mp, rnd_mp):
        res = bwc_synthesize(BwcInstance(arena_mp, rnd_mp, "1/3", "54/29"))
        assert isinstance(res, NotFound)
        assert res.witness["optimal_expectation"] == Fraction(54, 29)

    def test_low_threshold_gives_k1_l1(self, arena_mp, rnd_mp):
        res = bwc_synthesize(BwcInstance(arena_mp, rnd_mp, -1, "3/2"))
        assert res.params == (1, 1)
        assert res.expectation == Fraction(54, 29)

    def test_pure_worst_case_flag(self, arena_mp, rnd_mp):
        inst = BwcInstance(arena_mp, rnd_mp, "1/2", "1/3")
        assert inst.pure_worst_case
        res = bwc_synthesize(inst)
        assert res.pure_worst_case and res.worst_case == 1
        assert certificate_report(res)["K"] is None

    def test_cap_exceeded_is_distinct(self, arena_mp, rnd_mp):
        with pytest.raises(CapExceeded) as err:
            bwc_synthesize(BwcInstance(arena_mp, rnd_mp, "1/3", "3/2"), (2, 2))
        assert err.value.tried == len(list(search_order((2, 2))))

    def test_search_order(self):
        assert list(search_order((2, 3)))[:5] == [(1, 1), (1, 2), (2, 1), (1, 3), (2, 2)]

    def test_random_certificates_reverify(self):
        rng = random.Random(64)
        found = 0
        for _ in range(40):
            arena = random_arena(rng, n_max=4)
            rnd = random_rnd(rng, arena)
            inst = BwcInstance(arena, rnd, Fraction(rng.randint(-4, 2)), Fraction(rng.randint(-2, 4)))
            try:
                res = bwc_synthesize(inst, (6, 6))
            except CapExceeded:
                continue
            if isinstance(res, NotFound):
                continue
            found += 1
            assert worst_case_value_of(arena, res.strategy) == res.worst_case > inst.lambda_wc
            assert expected_mp(arena, res.strategy, rnd) == res.expectation
            if not res.pure_worst_case:
                assert res.expectation > inst.lambda_exp
        assert found > 5
