"""Regret of Eve strategies against memoryless or unrestricted adversaries.

Regret of ``sigma`` against a class of Adam strategies is the largest gap,
over Adam strategies ``tau`` in the class, between the best value Eve could
have obtained against ``tau`` and the value ``sigma`` obtains against it.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .arena import ADAM, EVE, Arena
from .bwc import product_graph
from .graphs import bfs_path, one_player_values, optimal_lasso
from .joint import joint_outcomes
from .mpgames import strategy_edges
from .play import Lasso, PayoffKind, outcome_lasso, payoff
from .strategy import FiniteMemoryStrategy, enumerate_by_memory, enumerate_strategies


class AdversaryClass(enum.Enum):
    ARBITRARY = "Arbitrary"
    MEMORYLESS = "Memoryless"
    WORDS = "Words"

    @classmethod
    def parse(cls, value) -> "AdversaryClass":
        if isinstance(value, AdversaryClass):
            return value
        for c in cls:
            if str(value).strip().lower() == c.value.lower():
                return c
        raise ValueError(f"unknown adversary class {value!r}")


@dataclass(frozen=True)
class RegretReport:
    regret: Fraction
    witness_adversary: Any
    best_response_value: Fraction
    achieved_value: Fraction
    adversary_class: AdversaryClass
    bounds: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.regret != self.best_response_value - self.achieved_value or self.regret < 0:
            raise AssertionError("inconsistent regret report")


@dataclass(frozen=True)
class PlayWitness:
    """An unrestricted adversary given by its behaviour: it steers the play
    along ``achieved``; had Eve left it at ``deviation``, it would have helped
    her along ``best_response``."""

    achieved: Lasso
    best_response: Lasso
    deviation: tuple | None


def regret_at_most(report: RegretReport, threshold) -> bool:
    return report.regret <= Fraction(threshold)


# -- memoryless adversaries ---------------------------------------------


def best_response_value(arena: Arena, tau: FiniteMemoryStrategy, kind: PayoffKind) -> Fraction:
    """Best value Eve reaches against a memoryless Adam strategy."""
    g = arena.graph(strategy_edges(arena, tau))
    return one_player_values(g, kind, True)[arena.initial]


def regret_vs_memoryless(arena: Arena, sigma: FiniteMemoryStrategy, kind=PayoffKind.MP) -> RegretReport:
    kind = PayoffKind.parse(kind)
    best = None
    for tau in enumerate_strategies(arena, ADAM, 1):
        br = best_response_value(arena, tau, kind)
        val = payoff(arena, outcome_lasso(arena, sigma, tau), kind)
        if best is None or br - val > best[0]:
            best = (br - val, tau, br, val)
    return RegretReport(best[0], best[1], best[2], best[3], AdversaryClass.MEMORYLESS)


def min_regret_memoryless_adversary(arena: Arena, kind=PayoffKind.MP, eve_memory_bound: int = 1):
    """Least regret against memoryless Adam over Eve strategies with at most
    ``eve_memory_bound`` memory states; returns ``(report, strategy)``.

    Eve's strategies are enumerated as Mealy machines over visited states,
    which includes every way of remembering Adam's choices seen so far.
    Smaller machines come first, so ties go to the least memory.
    """
    kind = PayoffKind.parse(kind)
    best = None
    for sigma in enumerate_by_memory(arena, EVE, eve_memory_bound):
        rep = regret_vs_memoryless(arena, sigma, kind)
        if best is None or rep.regret < best[0].regret:
            best = (rep, sigma)
            if rep.regret == 0:
                break
    rep, sigma = best
    return RegretReport(
        rep.regret, rep.witness_adversary, rep.best_response_value, rep.achieved_value,
        AdversaryClass.MEMORYLESS, {"eve_memory": eve_memory_bound},
    ), sigma


# -- unrestricted adversaries -------------------------------------------


def _running(kind: PayoffKind, r, w):
    if kind is PayoffKind.INF:
        return w if r is None else min(r, w)
    if kind is PayoffKind.SUP:
        return w if r is None else max(r, w)
    return None


def _combine(kind: PayoffKind, r, *vals):
    if kind is PayoffKind.INF:
        return min(v for v in (r, *vals) if v is not None)
    if kind is PayoffKind.SUP:
        return max(v for v in (r, *vals) if v is not None)
    return vals[-1]


def regret_vs_arbitrary(arena: Arena, sigma: FiniteMemoryStrategy, kind=PayoffKind.MP) -> RegretReport:
    """Regret against every Adam strategy, on the graph of plays consistent
    with ``sigma``.

    For each reachable configuration the adversary may have steered to, the
    gain is the best cooperative value Eve could get by leaving ``sigma``
    there, minus the least value Adam can then force while Eve stays with
    ``sigma``.  For Inf and Sup the configuration also records the running
    minimum or maximum, since these payoffs depend on the whole play.
    """
    kind = PayoffKind.parse(kind)
    base, start = product_graph(arena, sigma)
    coop = one_player_values(arena.graph(), kind, True)
    tracked = kind in (PayoffKind.INF, PayoffKind.SUP)

    # graph of (configuration, running extreme)
    g: dict = {}
    root = (start, None)
    todo = [root]
    while todo:
        node = todo.pop()
        if node in g:
            continue
        y, r = node
        g[node] = [((z, _running(kind, r, w)), w) for z, w in base[y]]
        todo.extend(n for n, _ in g[node] if n not in g)

    # continuation values of the kind itself, with Adam minimizing
    low_future = one_player_values(base, kind, False)

    def low(node):
        y, r = node
        return _combine(kind, r, low_future[y])

    best = (Fraction(0), None, None)
    for node in sorted(g, key=repr):
        (s, m), r = node
        if arena.owner[s] is not EVE:
            continue
        chosen = sigma.move(m, s)
        for t in arena.succ[s]:
            if t == chosen:
                continue
            dev = _combine(kind, r, arena.weight(s, t) if tracked else None, coop[t])
            gain = dev - low(node)
            if gain > best[0]:
                best = (gain, node, t)

    if best[1] is None:
        achieved = _project(optimal_lasso(base, start, kind, False))
        value = payoff(arena, achieved, kind)
        witness = PlayWitness(achieved, achieved, None)
        return RegretReport(Fraction(0), witness, value, value, AdversaryClass.ARBITRARY)

    gain, node, t = best
    path = bfs_path(g, root, {node})
    prefix = [n[0] for n in path]  # configurations from start to the deviation point
    tail = optimal_lasso(base, node[0], kind, False)
    achieved = _join(prefix[:-1], tail)
    br_tail = optimal_lasso(arena.graph(), t, kind, True)
    stem = [y[0] for y in prefix] + list(br_tail.stem)
    best_resp = Lasso(stem, br_tail.cycle).normalized()
    a_val, b_val = payoff(arena, achieved, kind), payoff(arena, best_resp, kind)
    if b_val - a_val != gain:
        raise AssertionError("regret witness does not reproduce the computed regret")
    return RegretReport(gain, PlayWitness(achieved, best_resp, (node[0][0], t)), b_val, a_val, AdversaryClass.ARBITRARY)


def _project(lasso: Lasso) -> Lasso:
    return Lasso([y[0] for y in lasso.stem], [y[0] for y in lasso.cycle]).normalized()


def _join(prefix_configs: list, tail: Lasso) -> Lasso:
    stem = [y[0] for y in prefix_configs] + [y[0] for y in tail.stem]
    return Lasso(stem, [y[0] for y in tail.cycle]).normalized()


def min_regret_arbitrary(arena: Arena, kind=PayoffKind.MP, eve_memory_bound: int = 1):
    kind = PayoffKind.parse(kind)
    best = None
    for sigma in enumerate_by_memory(arena, EVE, eve_memory_bound):
        rep = regret_vs_arbitrary(arena, sigma, kind)
        if best is None or rep.regret < best[0].regret:
            best = (rep, sigma)
            if rep.regret == 0:
                break
    rep, sigma = best
    return RegretReport(
        rep.regret, rep.witness_adversary, rep.best_response_value, rep.achieved_value,
        AdversaryClass.ARBITRARY, {"eve_memory": eve_memory_bound},
    ), sigma


# -- brute force --------------------------------------------------------


def regret_brute_force(arena: Arena, sigma: FiniteMemoryStrategy, kind=PayoffKind.MP, adversary_bound: int = 2):
    """Regret against Adam strategies with at most ``adversary_bound`` memory
    states, by explicit enumeration of joint behaviours.  Returns
    ``(regret, adversary)``."""
    kind = PayoffKind.parse(kind)
    best = (None, None)
    for leaf in joint_outcomes(arena, [sigma], adversary_bound, with_free=True):
        gap = payoff(arena, leaf.free_outcome, kind) - payoff(arena, leaf.outcomes[0], kind)
        if best[0] is None or gap > best[0]:
            best = (gap, leaf.adversary)
    return best
