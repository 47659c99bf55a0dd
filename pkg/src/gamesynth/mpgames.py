"""Zero-sum mean-payoff games: one-player cycle values and two-player solving."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .arena import ADAM, EVE, Arena, Player, State
from .graphs import max_mean_values, min_mean_values, reachable
from .rational import common_denominator
from .strategy import FiniteMemoryStrategy, memoryless


class NonTotalRestriction(ValueError):
    def __init__(self, state):
        self.state = state
        super().__init__(f"restricted edge relation leaves state {state!r} without successor")


def strategy_edges(arena: Arena, strategy: FiniteMemoryStrategy) -> set[tuple]:
    """Edges left once a memoryless ``strategy`` is fixed (opponent free)."""
    choice = strategy.choices()
    return {
        (s, t)
        for s in arena.states
        for t in arena.succ[s]
        if arena.owner[s] is not strategy.player or choice[s] == t
    }


def _one_player(arena: Arena, restrict, fn) -> dict:
    g = arena.graph(restrict)
    dead = {s for s, succ in g.items() if not succ}
    if not dead:
        return fn(g)
    rev = {s: [] for s in g}
    for s, succ in g.items():
        for t, w in succ:
            rev[t].append((s, w))
    doomed = reachable(rev, dead)
    if arena.initial in doomed:
        first = min(dead & reachable(g, [arena.initial]), key=arena.states.index)
        raise NonTotalRestriction(first)
    sub = {s: succ for s, succ in g.items() if s not in doomed}
    return fn(sub)


def max_mean_cycle(arena: Arena, restrict: Iterable[tuple] | None = None) -> dict:
    """Best mean payoff from every state when one player controls all choices.

    With ``restrict`` only the listed ``(src, dst)`` edges are usable; states
    that could then run into a dead end are left out of the result, and a dead
    end reachable from the initial state raises :class:`NonTotalRestriction`.
    """
    return _one_player(arena, restrict, max_mean_values)


def min_mean_cycle(arena: Arena, restrict: Iterable[tuple] | None = None) -> dict:
    return _one_player(arena, restrict, min_mean_values)


@dataclass(frozen=True)
class GameValueReport:
    value: Mapping[State, Fraction]
    eve_strategy: FiniteMemoryStrategy
    adam_strategy: FiniteMemoryStrategy


def certificate_holds(arena: Arena, value: Mapping, strategy: FiniteMemoryStrategy) -> bool:
    """Fixing ``strategy`` and letting the opponent optimize reproduces
    ``value`` at every state."""
    edges = strategy_edges(arena, strategy)
    if strategy.player is EVE:
        got = min_mean_cycle(arena, edges)
    else:
        got = max_mean_cycle(arena, edges)
    return all(got[s] == value[s] for s in arena.states)


class _Solver:
    def __init__(self, arena: Arena):
        self.arena = arena
        self.n = len(arena.states)
        self.scale = common_denominator(arena.edge_weights())
        self.succ = {
            s: [(t, int(arena.weight(s, t) * self.scale)) for t in arena.succ[s]] for s in arena.states
        }
        W = max(abs(w) for succ in self.succ.values() for _, w in succ)
        self.horizon = 4 * self.n ** 3 * max(W, 1)

    def _step(self, v: dict) -> dict:
        out = {}
        for s, succ in self.succ.items():
            vals = [w + v[t] for t, w in succ]
            out[s] = max(vals) if self.arena.owner[s] is EVE else min(vals)
        return out

    def _greedy(self, v: dict, player: Player) -> FiniteMemoryStrategy:
        chosen = {}
        for s in self.arena.states_of(player):
            best = None
            for t, w in self.succ[s]:  # successors sorted: first optimum is lowest id
                x = w + v[t]
                if best is None or (x > best[0] if player is EVE else x < best[0]):
                    best = (x, t)
            chosen[s] = best[1]
        return memoryless(self.arena, player, chosen)

    def run(self):
        """Value iteration with exactly certified early exits at doubling
        horizons; falls back to rounding at the full horizon."""
        v = {s: 0 for s in self.arena.states}
        k = 0
        check = max(self.n, 1)
        while k < self.horizon:
            v = self._step(v)
            k += 1
            if k == check and k < self.horizon:
                check *= 2
                sigma, tau = self._greedy(v, EVE), self._greedy(v, ADAM)
                low = min_mean_cycle(self.arena, strategy_edges(self.arena, sigma))
                high = max_mean_cycle(self.arena, strategy_edges(self.arena, tau))
                if low == high:
                    return low, sigma, tau
        value = {s: Fraction(v[s], k * self.scale).limit_denominator(self.n) for s in self.arena.states}
        sigma, tau = self._greedy(v, EVE), self._greedy(v, ADAM)
        return value, sigma, tau


def game_values(arena: Arena) -> dict:
    return _Solver(arena).run()[0]


def _prune(arena: Arena, value: Mapping, player: Player) -> FiniteMemoryStrategy:
    """Keep, state by state, the lowest successor whose exclusive use preserves
    every game value."""
    current = arena
    chosen = {}
    for s in arena.states_of(player):
        for t in arena.succ[s]:
            keep = [(a, b) for a in current.states for b in current.succ[a] if a != s or b == t]
            trial = current.restricted(keep)
            if game_values(trial) == dict(value):
                current, chosen[s] = trial, t
                break
        else:
            raise AssertionError(f"no value-preserving successor at {s!r}")
    return memoryless(arena, player, chosen)


def solve_mp_game(arena: Arena) -> GameValueReport:
    """Exact mean-payoff values with memoryless optimal strategies for both
    players, each verified as a certificate before returning."""
    value, sigma, tau = _Solver(arena).run()
    if not certificate_holds(arena, value, sigma):
        sigma = _prune(arena, value, EVE)
    if not certificate_holds(arena, value, tau):
        tau = _prune(arena, value, ADAM)
    if not (certificate_holds(arena, value, sigma) and certificate_holds(arena, value, tau)):
        raise AssertionError("mean-payoff certificates failed")
    return GameValueReport(dict(value), sigma, tau)
