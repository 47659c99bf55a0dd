"""Markov chains and MDPs induced by a randomized memoryless Adam.

Expected mean payoff of a finite Markov chain from its initial node is
computed exactly: each bottom SCC contributes its long-run gain, weighted by
the probability of being absorbed into it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .arena import ADAM, EVE, Arena, State
from .graphs import sccs
from .linalg import solve_system
from .rational import as_fraction
from .strategy import FiniteMemoryStrategy, memoryless


class SupportViolation(ValueError):
    pass


@dataclass(frozen=True)
class RandomizedMemorylessStrategy:
    """For each Adam state, an exact distribution over successors."""

    dist: Mapping[State, Mapping[State, Fraction]]

    def __post_init__(self):
        clean = {}
        for s, d in self.dist.items():
            row = {t: as_fraction(p) for t, p in d.items()}
            if any(p < 0 for p in row.values()):
                raise ValueError(f"negative probability at {s!r}")
            if sum(row.values(), Fraction(0)) != 1:
                raise ValueError(f"distribution at {s!r} does not sum to 1")
            clean[s] = {t: p for t, p in row.items() if p != 0}
        object.__setattr__(self, "dist", clean)

    def support(self, s: State) -> frozenset:
        return frozenset(self.dist[s])

    def check(self, arena: Arena) -> None:
        for s, row in self.dist.items():
            if arena.owner.get(s) is not ADAM:
                raise SupportViolation(f"{s!r} is not an Adam state")
            for t in row:
                if not arena.has_edge(s, t):
                    raise SupportViolation(f"{s!r}->{t!r} is not an edge")
        for s in arena.states_of(ADAM):
            if s not in self.dist:
                raise SupportViolation(f"no distribution given for Adam state {s!r}")


@dataclass(frozen=True)
class InducedChain:
    nodes: tuple
    transition: Mapping
    step_weight: Mapping
    initial: object

    def graph(self) -> dict:
        return {v: [(u, self.step_weight[(v, u)]) for u in self.transition[v]] for v in self.nodes}


def induce_chain(arena: Arena, sigma: FiniteMemoryStrategy, rnd: RandomizedMemorylessStrategy) -> InducedChain:
    """Reachable part of the product of ``arena`` with ``sigma``'s memory,
    nodes ``(state, memory)``."""
    rnd.check(arena)
    if sigma.player is not EVE:
        raise ValueError("sigma must be an Eve strategy")
    start = (arena.initial, sigma.initial_memory)
    order, trans, weight = [start], {}, {}
    seen = {start}
    i = 0
    while i < len(order):
        s, m = order[i]
        i += 1
        m2 = sigma.next_memory(m, s)
        if arena.owner[s] is EVE:
            row = {sigma.move(m, s): Fraction(1)}
        else:
            row = dict(rnd.dist[s])
        out = {}
        for t, p in row.items():
            node = (t, m2)
            out[node] = p
            weight[((s, m), node)] = arena.weight(s, t)
            if node not in seen:
                seen.add(node)
                order.append(node)
        trans[(s, m)] = out
    return InducedChain(tuple(order), trans, weight, start)


def chain_from_rows(transition: Mapping, weight: Mapping, initial) -> InducedChain:
    """Chain from explicit rows (used for tests and generic chains)."""
    order, seen = [initial], {initial}
    i = 0
    while i < len(order):
        for u in transition[order[i]]:
            if u not in seen:
                seen.add(u)
                order.append(u)
        i += 1
    trans = {v: {u: as_fraction(p) for u, p in transition[v].items() if p != 0} for v in order}
    for v, row in trans.items():
        if sum(row.values(), Fraction(0)) != 1:
            raise ValueError(f"row {v!r} does not sum to 1")
    wt = {(v, u): as_fraction(weight[(v, u)]) for v in order for u in trans[v]}
    return InducedChain(tuple(order), trans, wt, initial)


def bottom_components(chain: InducedChain) -> list[list]:
    g = {v: [(u, 0) for u in chain.transition[v]] for v in chain.nodes}
    out = []
    for comp in sccs(g):
        inside = set(comp)
        if all(u in inside for v in comp for u in chain.transition[v]):
            out.append(comp)
    return out


def stationary_distribution(chain: InducedChain, component: list) -> dict:
    """Unique stationary distribution of the chain restricted to a bottom SCC."""
    comp = list(component)
    rows, rhs = [], []
    for j in comp[:-1]:
        row = {i: chain.transition[i].get(j, Fraction(0)) for i in comp}
        row[j] = row[j] - 1
        rows.append(row)
        rhs.append(Fraction(0))
    rows.append({i: Fraction(1) for i in comp})
    rhs.append(Fraction(1))
    return solve_system(rows, rhs, comp)


def expected_step_weight(chain: InducedChain, v) -> Fraction:
    return sum((p * chain.step_weight[(v, u)] for u, p in chain.transition[v].items()), Fraction(0))


def _gain_linear(chain: InducedChain, comp: list) -> Fraction:
    pi = stationary_distribution(chain, comp)
    return sum((pi[v] * expected_step_weight(chain, v) for v in comp), Fraction(0))


def _gain_elimination(chain: InducedChain, comp: list) -> Fraction:
    """Renewal-reward gain of an irreducible component by state elimination.

    Every remaining arc carries (probability, reward mass, length mass) of
    the paths it summarizes; eliminating a node splices its in- and out-arcs
    through its geometric self-loop.  When only the reference node is left,
    its self-loop gives mean reward per step as reward mass over length mass.
    """
    ref = comp[0]
    inside = set(comp)
    out: dict = {v: {} for v in comp}
    inn: dict = {v: {} for v in comp}
    for v in comp:
        for u, p in chain.transition[v].items():
            if u in inside:
                arc = (p, p * chain.step_weight[(v, u)], p)
                out[v][u] = arc
                inn[u][v] = arc
    alive = set(comp)
    alive.discard(ref)
    while alive:
        k = min(alive, key=lambda x: (len(inn[x]) * len(out[x]), repr(x)))
        alive.discard(k)
        loop = out[k].pop(k, None)
        inn[k].pop(k, None)
        if loop is None:
            s_p, s_r, s_t = Fraction(1), Fraction(0), Fraction(0)
        else:
            q = 1 / (1 - loop[0])
            s_p, s_r, s_t = q, loop[1] * q * q, loop[2] * q * q
        for i, (p1, r1, t1) in list(inn[k].items()):
            del out[i][k]
            a_p, a_r, a_t = p1 * s_p, r1 * s_p + p1 * s_r, t1 * s_p + p1 * s_t
            for j, (p2, r2, t2) in out[k].items():
                new = (a_p * p2, a_r * p2 + a_p * r2, a_t * p2 + a_p * t2)
                old = out[i].get(j)
                if old is not None:
                    new = (old[0] + new[0], old[1] + new[1], old[2] + new[2])
                out[i][j] = new
                inn[j][i] = new
        for j in out[k]:
            del inn[j][k]
        out[k], inn[k] = {}, {}
    _, r, t = out[ref][ref]
    return r / t


ELIMINATION_LIMIT = 60


def component_gain(chain: InducedChain, comp: list, method: str = "auto") -> Fraction:
    if method == "linear" or (method == "auto" and len(comp) <= ELIMINATION_LIMIT):
        return _gain_linear(chain, comp)
    return _gain_elimination(chain, comp)


def absorption_values(chain: InducedChain, node_gain: Mapping) -> dict:
    """Expected long-run gain at every node, given the gain of every node
    lying in a bottom SCC."""
    transient = [v for v in chain.nodes if v not in node_gain]
    values = dict(node_gain)
    if transient:
        tset = set(transient)
        rows, rhs = [], []
        for v in transient:
            row = {v: Fraction(1)}
            b = Fraction(0)
            for u, p in chain.transition[v].items():
                if u in tset:
                    row[u] = row.get(u, Fraction(0)) - p
                else:
                    b += p * node_gain[u]
            rows.append(row)
            rhs.append(b)
        values.update(solve_system(rows, rhs, transient))
    return values


def chain_expected_mp(chain: InducedChain, method: str = "auto") -> Fraction:
    """Exact expected mean payoff from the chain's initial node."""
    node_gain = {}
    for comp in bottom_components(chain):
        g = component_gain(chain, comp, method)
        for v in comp:
            node_gain[v] = g
    return absorption_values(chain, node_gain)[chain.initial]


def expected_mp(arena: Arena, sigma: FiniteMemoryStrategy, rnd: RandomizedMemorylessStrategy) -> Fraction:
    return chain_expected_mp(induce_chain(arena, sigma, rnd))


# -- optimal expectation ------------------------------------------------


def _evaluate(arena: Arena, rnd: RandomizedMemorylessStrategy, policy: dict):
    """Gain and bias of a memoryless Eve policy at every arena state, with
    bias 0 at the first node of each recurrent class."""
    rows = {}
    for s in arena.states:
        rows[s] = {policy[s]: Fraction(1)} if arena.owner[s] is EVE else rnd.dist[s]
    reward = {s: sum((p * arena.weight(s, t) for t, p in rows[s].items()), Fraction(0)) for s in arena.states}
    chain = InducedChain(
        tuple(arena.states), rows, {(s, t): arena.weight(s, t) for s in arena.states for t in rows[s]}, arena.initial
    )
    gain, bias = {}, {}
    for comp in bottom_components(chain):
        g = _gain_linear(chain, comp)
        ref = min(comp, key=arena.states.index)
        others = [v for v in comp if v != ref]
        for v in comp:
            gain[v] = g
        bias[ref] = Fraction(0)
        if others:
            eqs, rhs = [], []
            for v in others:
                row = {v: Fraction(1)}
                for u, p in rows[v].items():
                    if u != ref:
                        row[u] = row.get(u, Fraction(0)) - p
                eqs.append(row)
                rhs.append(reward[v] - g)
            bias.update(solve_system(eqs, rhs, others))
    gain = absorption_values(chain, gain)
    transient = [s for s in arena.states if s not in bias]
    if transient:
        tset = set(transient)
        eqs, rhs = [], []
        for v in transient:
            row = {v: Fraction(1)}
            b = reward[v] - gain[v]
            for u, p in rows[v].items():
                if u in tset:
                    row[u] = row.get(u, Fraction(0)) - p
                else:
                    b += p * bias[u]
            eqs.append(row)
            rhs.append(b)
        bias.update(solve_system(eqs, rhs, transient))
    return gain, bias


def optimal_expectation(arena: Arena, rnd: RandomizedMemorylessStrategy, max_rounds: int = 10_000):
    """Maximal expected mean payoff from the initial state against ``rnd``
    and a memoryless Eve strategy attaining it.

    Multichain policy iteration: improve gain first, then bias among
    gain-optimal successors; the current choice is kept whenever it is
    optimal, otherwise the lowest optimal successor is taken.
    """
    rnd.check(arena)
    eve = arena.states_of(EVE)
    policy = {s: arena.succ[s][0] for s in eve}
    for _ in range(max_rounds):
        gain, bias = _evaluate(arena, rnd, policy)
        changed = False
        for s in eve:
            best = max(gain[t] for t in arena.succ[s])
            if gain[policy[s]] < best:
                policy[s] = next(t for t in arena.succ[s] if gain[t] == best)
                changed = True
        if not changed:
            for s in eve:
                cur = policy[s]
                top = gain[cur]
                cands = [t for t in arena.succ[s] if gain[t] == top]
                score = {t: arena.weight(s, t) + bias[t] for t in cands}
                best = max(score.values())
                if score[cur] < best:
                    policy[s] = next(t for t in cands if score[t] == best)
                    changed = True
        if not changed:
            sigma = memoryless(arena, EVE, policy)
            value = expected_mp(arena, sigma, rnd)
            if value != gain[arena.initial]:
                raise AssertionError("policy iteration value disagrees with chain analysis")
            return value, sigma
    raise RuntimeError("policy iteration did not converge")
