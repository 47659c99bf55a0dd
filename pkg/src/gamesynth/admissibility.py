"""Win-Hyp and bounded-memory admissibility for Büchi objective pairs.

Admissibility quantifies over opponent strategies.  Here the opponent ranges
over strategies with at most ``adversary_bound`` memory states, so every
verdict is exact relative to its bounds and reports them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .arena import ADAM, EVE, Arena, Player
from .bwc import product_graph
from .graphs import is_nontrivial, reachable, sccs
from .joint import joint_outcomes
from .parity import BuchiSolution, solve_parity3
from .play import BuchiObjective, outcome_of
from .strategy import FiniteMemoryStrategy, enumerate_strategies


@dataclass(frozen=True)
class ObjectivePair:
    eve: BuchiObjective
    adam: BuchiObjective

    def check(self, arena: Arena) -> None:
        self.eve.check(arena)
        self.adam.check(arena)

    def of(self, player: Player) -> BuchiObjective:
        return self.eve if player is EVE else self.adam


@dataclass(frozen=True)
class DominanceVerdict:
    dominated: bool
    witness_tau_better: FiniteMemoryStrategy | None
    bound_used: int
    # an opponent strategy against which sigma wins but sigma_prime loses
    counterexample: FiniteMemoryStrategy | None = None


class AAResult(NamedTuple):
    holds: bool
    witness: FiniteMemoryStrategy | None


def win_hyp_priorities(arena: Arena, obj: ObjectivePair) -> dict:
    pr = {}
    for s in arena.states:
        if s in obj.eve.target:
            pr[s] = 2
        elif s in obj.adam.target:
            pr[s] = 1
        else:
            pr[s] = 0
    return pr


def win_hyp_solve(arena: Arena, obj: ObjectivePair) -> BuchiSolution:
    """States from which Eve ensures: her target infinitely often, or Adam's
    target only finitely often."""
    obj.check(arena)
    sol = solve_parity3(arena, win_hyp_priorities(arena, obj))
    return BuchiSolution(sol.region, sol.eve_strategy)


def verify_win_hyp(arena: Arena, obj: ObjectivePair, sigma: FiniteMemoryStrategy) -> bool:
    """Whether every play consistent with the Eve strategy ``sigma`` (of any
    memory) satisfies the Win-Hyp objective."""
    g, start = product_graph(arena, sigma)
    keep = {v for v in g if v[0] not in obj.eve.target}
    sub = {v: [(u, w) for u, w in g[v] if u in keep] for v in keep}
    bad = set()
    for comp in sccs(sub):
        if is_nontrivial(sub, comp) and any(v[0] in obj.adam.target for v in comp):
            bad.update(comp)
    return not (bad & reachable(g, [start]))


def dominates(
    arena: Arena,
    obj: ObjectivePair,
    player: Player,
    sigma: FiniteMemoryStrategy,
    sigma_prime: FiniteMemoryStrategy,
    adversary_bound: int = 1,
) -> DominanceVerdict:
    """Whether ``sigma_prime`` dominates ``sigma`` for ``player``: it wins
    whenever ``sigma`` wins, and wins somewhere ``sigma`` loses, against
    opponents with memory at most ``adversary_bound``."""
    player = Player.parse(player)
    if sigma.player is not player or sigma_prime.player is not player:
        raise ValueError(f"both strategies must belong to {player}")
    target = obj.of(player)
    witness = None
    for leaf in joint_outcomes(arena, [sigma, sigma_prime], adversary_bound):
        a, b = (target.satisfied(x) for x in leaf.outcomes)
        if a and not b:
            return DominanceVerdict(False, None, adversary_bound, leaf.adversary)
        if b and not a and witness is None:
            witness = leaf.adversary
    return DominanceVerdict(witness is not None, witness, adversary_bound)


def win_table(arena: Arena, obj: ObjectivePair, player: Player, strategies, opponents) -> list[tuple]:
    target = obj.of(player)
    return [tuple(target.satisfied(outcome_of(arena, s, t)) for t in opponents) for s in strategies]


def admissible_strategies(
    arena: Arena,
    obj: ObjectivePair,
    player: Player,
    memory_bound: int = 1,
    adversary_bound: int = 1,
) -> list[FiniteMemoryStrategy]:
    """Strategies of ``player`` with memory at most ``memory_bound`` that no
    such strategy dominates, opponents having memory at most
    ``adversary_bound``.

    Computed from win vectors against the canonical opponent strategies up
    to the bound; these cover every opponent behaviour, so the result agrees
    with pairwise :func:`dominates`.
    """
    player = Player.parse(player)
    obj.check(arena)
    mine = list(enumerate_strategies(arena, player, memory_bound))
    theirs = list(enumerate_strategies(arena, player.opponent, adversary_bound))
    wins = win_table(arena, obj, player, mine, theirs)
    out = []
    for i, wi in enumerate(wins):
        dominated = any(
            all(b >= a for a, b in zip(wi, wj)) and any(b and not a for a, b in zip(wi, wj))
            for j, wj in enumerate(wins)
            if j != i
        )
        if not dominated:
            out.append(mine[i])
    return out


def assume_admissible_check(
    arena: Arena, obj: ObjectivePair, memory_bound: int = 1, adversary_bound: int = 1
) -> AAResult:
    """First bounded-admissible Eve strategy winning against every
    bounded-admissible Adam strategy.  Eve strategies have memory at most
    ``memory_bound`` and Adam strategies at most ``adversary_bound``."""
    eve_adm = admissible_strategies(arena, obj, EVE, memory_bound, adversary_bound)
    adam_adm = admissible_strategies(arena, obj, ADAM, adversary_bound, memory_bound)
    for sigma in eve_adm:
        if all(obj.eve.satisfied(outcome_of(arena, sigma, tau)) for tau in adam_adm):
            return AAResult(True, sigma)
    return AAResult(False, None)
