"""Parity games with priorities {0, 1, 2} and Büchi games on top of them.

Eve wins a play when the largest priority seen infinitely often is even.
"""

from __future__ import annotations

from typing import Mapping, NamedTuple

from .arena import ADAM, EVE, Arena, Player
from .graphs import is_nontrivial, sccs
from .play import BuchiObjective
from .strategy import FiniteMemoryStrategy, memoryless


class ParitySolution(NamedTuple):
    region: frozenset
    eve_strategy: FiniteMemoryStrategy
    adam_strategy: FiniteMemoryStrategy


class BuchiSolution(NamedTuple):
    region: frozenset
    strategy: FiniteMemoryStrategy


def check_priorities(arena: Arena, priority: Mapping) -> dict:
    pr = {}
    for s in arena.states:
        if s not in priority:
            raise ValueError(f"state {s!r} has no priority")
        p = int(priority[s])
        if p not in (0, 1, 2):
            raise ValueError(f"priority {p} of {s!r} is not in {{0, 1, 2}}")
        pr[s] = p
    return pr


def attractor(arena: Arena, nodes: set, target: set, player: Player) -> tuple[set, dict]:
    """States of ``nodes`` from which ``player`` forces a visit to ``target``
    inside the subgame, with an attracting move for each of the player's
    states.  Grown layer by layer; the lowest successor closer to the target
    is chosen."""
    attr = set(target) & nodes
    moves: dict = {}
    while True:
        layer = []
        for s in arena.states:
            if s not in nodes or s in attr:
                continue
            inside = [t for t in arena.succ[s] if t in nodes]
            if arena.owner[s] is player:
                hit = [t for t in inside if t in attr]
                if hit:
                    layer.append(s)
                    moves[s] = hit[0]
            elif all(t in attr for t in inside):
                layer.append(s)
        if not layer:
            return attr, moves
        attr.update(layer)


def _zielonka(arena: Arena, pr: dict, nodes: frozenset):
    """Returns (eve region, adam region, moves) with moves for each player's
    states in that player's region."""
    if not nodes:
        return set(), set(), {}
    d = max(pr[s] for s in nodes)
    p = EVE if d % 2 == 0 else ADAM
    top = {s for s in nodes if pr[s] == d}
    A, attr_moves = attractor(arena, set(nodes), top, p)
    sub_e, sub_a, sub_moves = _zielonka(arena, pr, frozenset(nodes - A))
    opp_sub = sub_a if p is EVE else sub_e
    if not opp_sub:
        moves = dict(sub_moves)
        moves.update(attr_moves)
        for s in top:
            if arena.owner[s] is p:
                moves[s] = next(t for t in arena.succ[s] if t in nodes)
        region = set(nodes)
        return (region, set(), moves) if p is EVE else (set(), region, moves)
    B, b_moves = attractor(arena, set(nodes), opp_sub, p.opponent)
    rest_e, rest_a, rest_moves = _zielonka(arena, pr, frozenset(nodes - B))
    moves = {s: t for s, t in rest_moves.items()}
    for s in opp_sub:
        if s in sub_moves and arena.owner[s] is p.opponent:
            moves[s] = sub_moves[s]
    for s, t in b_moves.items():
        if s not in opp_sub:
            moves[s] = t
    if p is EVE:
        return rest_e, rest_a | B, moves
    return rest_e | B, rest_a, moves


def _bad_cycle(arena: Arena, pr: dict, region: set, strat: FiniteMemoryStrategy) -> bool:
    """Whether the strategy-restricted graph inside ``region`` has a cycle
    whose top priority has the wrong parity for ``strat``'s player."""
    player = strat.player
    choice = strat.choices()
    g = {}
    for s in region:
        succ = [choice[s]] if arena.owner[s] is player else list(arena.succ[s])
        if any(t not in region for t in succ):
            return True
        g[s] = [(t, 0) for t in succ]
    bad = (1,) if player is EVE else (0, 2)
    for p in bad:
        sub = {s: [(t, w) for t, w in g[s] if pr[t] <= p] for s in g if pr[s] <= p}
        for comp in sccs(sub):
            if is_nontrivial(sub, comp) and any(pr[s] == p for s in comp):
                return True
    return False


def solve_parity3(arena: Arena, priority: Mapping) -> ParitySolution:
    """Winning region of Eve and memoryless winning strategies for both
    players (each verified on its own region)."""
    pr = check_priorities(arena, priority)
    eve_r, adam_r, moves = _zielonka(arena, pr, frozenset(arena.states))
    sigma = memoryless(arena, EVE, {s: moves[s] for s in eve_r if arena.owner[s] is EVE})
    tau = memoryless(arena, ADAM, {s: moves[s] for s in adam_r if arena.owner[s] is ADAM})
    if eve_r | adam_r != set(arena.states) or eve_r & adam_r:
        raise AssertionError("regions do not partition the states")
    if _bad_cycle(arena, pr, eve_r, sigma) or _bad_cycle(arena, pr, adam_r, tau):
        raise AssertionError("parity strategy certificate failed")
    return ParitySolution(frozenset(eve_r), sigma, tau)


def buchi_priorities(arena: Arena, obj: BuchiObjective) -> dict:
    # Off-target states need an odd priority: with 0 there, every play would
    # have an even top priority and Eve would win everywhere.
    return {s: 2 if s in obj.target else 1 for s in arena.states}


def solve_buchi(arena: Arena, obj: BuchiObjective) -> BuchiSolution:
    obj.check(arena)
    sol = solve_parity3(arena, buchi_priorities(arena, obj))
    return BuchiSolution(sol.region, sol.eve_strategy)
