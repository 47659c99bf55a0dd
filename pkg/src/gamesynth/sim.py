"""Seeded Monte Carlo runs of a strategy against an adversary.

Random bits come from SplitMix64 (Steele, Lea and Flood's splittable
generator; the output function below is the reference one): the state
advances by 0x9E3779B97F4A7C15 and is mixed by two xor-shift-multiply rounds
with constants 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB.  Repeat ``i`` of an
estimate is seeded with ``seed + i``.

A successor is drawn by comparing one 64-bit output ``u`` with the exact
cumulative probabilities: the first successor with ``u < ceil(c * 2**64)``
is taken, successors in ascending id order.  Weights are summed exactly and
divided once at the end, so reports are bit-identical across platforms.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from fractions import Fraction

from .arena import ADAM, EVE, Arena
from .mdp import RandomizedMemorylessStrategy
from .rational import common_denominator
from .strategy import FiniteMemoryStrategy

MASK = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        return z ^ (z >> 31)


@dataclass(frozen=True)
class SimConfig:
    steps: int
    repeats: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.steps < 1 or self.repeats < 1:
            raise ValueError("steps and repeats must be positive")
        if not 0 <= self.seed <= MASK:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class SimReport:
    empirical_mp: tuple
    mean: float
    sample_stddev: float
    seed: int


def _thresholds(rnd: RandomizedMemorylessStrategy) -> dict:
    table = {}
    for s, row in rnd.dist.items():
        cum = Fraction(0)
        cuts = []
        for t in sorted(row):
            cum += row[t]
            cuts.append((math.ceil(cum * (1 << 64)), t))
        table[s] = cuts
    return table


def _run(arena: Arena, sigma: FiniteMemoryStrategy, adversary, steps: int, seed: int, keep: int):
    if sigma.player is not EVE:
        raise ValueError("sigma must be an Eve strategy")
    randomized = isinstance(adversary, RandomizedMemorylessStrategy)
    if randomized:
        adversary.check(arena)
        cuts = _thresholds(adversary)
    elif adversary.player is not ADAM:
        raise ValueError("adversary must be an Adam strategy")
    scale = common_denominator(arena.edge_weights())
    iw = {(e.src, e.dst): int(arena.weight(e.src, e.dst) * scale) for e in arena.edges}
    rng = SplitMix64(seed)
    owner = arena.owner
    s, me = arena.initial, sigma.initial_memory
    ma = 0 if randomized else adversary.initial_memory
    trace = [s]
    total = 0
    for _ in range(steps):
        if owner[s] is EVE:
            t = sigma.move(me, s)
        elif randomized:
            u = rng.next()
            t = next(x for cut, x in cuts[s] if u < cut)
        else:
            t = adversary.move(ma, s)
        me = sigma.next_memory(me, s)
        if not randomized:
            ma = adversary.next_memory(ma, s)
        total += iw[(s, t)]
        s = t
        if len(trace) < keep:
            trace.append(s)
    return float(Fraction(total, scale * steps)), trace


def simulate_run(arena: Arena, sigma: FiniteMemoryStrategy, adversary, cfg: SimConfig, trace_prefix: int = 32):
    """One run of ``cfg.steps`` steps; returns ``(report, first states)``."""
    value, trace = _run(arena, sigma, adversary, cfg.steps, cfg.seed, trace_prefix)
    return SimReport((value,), value, 0.0, cfg.seed), trace


def estimate_expected_mp(arena: Arena, sigma: FiniteMemoryStrategy, adversary, cfg: SimConfig) -> SimReport:
    values = tuple(_run(arena, sigma, adversary, cfg.steps, (cfg.seed + i) & MASK, 0)[0] for i in range(cfg.repeats))
    sd = statistics.stdev(values) if len(values) > 1 else 0.0
    return SimReport(values, statistics.fmean(values), sd, cfg.seed)
