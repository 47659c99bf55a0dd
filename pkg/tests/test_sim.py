import math
import random
from fractions import Fraction

import pytest

from gamesynth import ADAM, EVE, SimConfig, SplitMix64, enumerate_strategies, estimate_expected_mp, memoryless, simulate_run
from gamesynth.sim import _thresholds

from conftest import random_arena, random_rnd

EXACT_EXP = Fraction(54, 29)


class TestGenerator:
    def test_reference_outputs(self):
        g = SplitMix64(0)
        assert [g.next() for _ in range(3)] == [0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F]

    def test_outputs_are_64_bit_and_spread(self):
        g = SplitMix64(12345)
        xs = [g.next() for _ in range(20000)]
        assert all(0 <= x < 1 << 64 for x in xs)
        top = sum(x >> 63 for x in xs)
        assert abs(top - 10000) < 4 * math.sqrt(5000)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            SimConfig(0)
        with pytest.raises(ValueError):
            SimConfig(10, 0)
        with pytest.raises(ValueError):
            SimConfig(10, 1, -1)


class TestSampler:
    def test_thresholds_are_exact_cumulative(self, rnd_mp):
        cuts = _thresholds(rnd_mp)[3]
        assert cuts == [(math.ceil(Fraction(9, 10) * 2 ** 64), 1), (2 ** 64, 2)]

    def test_choice_frequencies(self, arena_mp, rnd_mp, sigma_exp):
        _, trace = simulate_run(arena_mp, sigma_exp, rnd_mp, SimConfig(30000, 1, 3), trace_prefix=30001)
        after3 = [trace[i + 1] for i in range(len(trace) - 1) if trace[i] == 3]
        frac = after3.count(1) / len(after3)
        assert abs(frac - 0.9) < 4 * math.sqrt(0.09 / len(after3))


class TestEstimates:
    def test_golden_single_run(self, arena_mp, rnd_mp, sigma_exp):
        rep, _ = simulate_run(arena_mp, sigma_exp, rnd_mp, SimConfig(10**6, 1, 42))
        assert rep.mean == pytest.approx(1.861776, abs=5e-7)
        assert abs(rep.mean - float(EXACT_EXP)) <= 0.02

    def test_golden_repeats(self, arena_mp, rnd_mp, sigma_exp):
        rep = estimate_expected_mp(arena_mp, sigma_exp, rnd_mp, SimConfig(10**5, 20, 7))
        assert len(rep.empirical_mp) == 20
        assert rep.mean == pytest.approx(1.862079, abs=5e-7)
        assert rep.sample_stddev == pytest.approx(0.0017527779455241363, rel=1e-12)
        assert abs(rep.mean - float(EXACT_EXP)) <= 3 * rep.sample_stddev / math.sqrt(20)
        assert abs(rep.mean - float(EXACT_EXP)) <= 0.05

    def test_stay_strategy_is_exact(self, arena_mp, rnd_mp, sigma_wc):
        rep = estimate_expected_mp(arena_mp, sigma_wc, rnd_mp, SimConfig(10**4, 3, 1))
        assert rep.empirical_mp == (1.0, 1.0, 1.0)
        assert rep.sample_stddev == 0.0

    def test_deterministic_adversary(self, arena_mp, sigma_exp):
        steps = 10**4
        tau = memoryless(arena_mp, ADAM, {3: 2})
        rep = estimate_expected_mp(arena_mp, sigma_exp, tau, SimConfig(steps, 4, 9))
        # the play settles in the 2-3 cycle of weight 0 after one step
        assert all(abs(v) <= 6 / steps for v in rep.empirical_mp)
        assert rep.sample_stddev == 0.0

    def test_single_repeat(self, arena_mp, rnd_mp, sigma_exp):
        rep = estimate_expected_mp(arena_mp, sigma_exp, rnd_mp, SimConfig(5000, 1, 11))
        assert rep.empirical_mp == (rep.mean,)
        assert rep.sample_stddev == 0.0

    def test_bit_reproducible(self, arena_mp, rnd_mp, sigma_exp):
        cfg = SimConfig(20000, 5, 2**64 - 3)
        a = estimate_expected_mp(arena_mp, sigma_exp, rnd_mp, cfg)
        b = estimate_expected_mp(arena_mp, sigma_exp, rnd_mp, cfg)
        assert a == b
        # repeat i uses seed + i, wrapping at 2**64
        tail, _ = simulate_run(arena_mp, sigma_exp, rnd_mp, SimConfig(20000, 1, 1))
        assert a.empirical_mp[4] == tail.mean

    def test_values_within_weight_range(self):
        rng = random.Random(100)
        for _ in range(40):
            arena = random_arena(rng)
            rnd = random_rnd(rng, arena)
            sigma = rng.choice(list(enumerate_strategies(arena, EVE, 2)))
            rep = estimate_expected_mp(arena, sigma, rnd, SimConfig(500, 3, rng.randrange(2**64)))
            for v in rep.empirical_mp:
                assert float(arena.min_weight()) <= v <= float(arena.max_weight())

    def test_rejects_wrong_players(self, arena_mp, rnd_mp, sigma_exp):
        with pytest.raises(ValueError):
            estimate_expected_mp(arena_mp, memoryless(arena_mp, ADAM), rnd_mp, SimConfig(10))
        with pytest.raises(ValueError):
            estimate_expected_mp(arena_mp, sigma_exp, sigma_exp, SimConfig(10))
