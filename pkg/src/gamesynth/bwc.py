"""Beyond-worst-case synthesis with the block-switching combined strategy.

The combined strategy plays the expectation-optimal strategy in blocks of K
steps.  At the end of each block it compares the block's mean weight with
the worst-case threshold: above it, a new block starts; otherwise it plays
the worst-case-optimal strategy for L steps and then starts a new block.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .arena import EVE, Arena
from .graphs import min_mean_values
from .mdp import RandomizedMemorylessStrategy, expected_mp, optimal_expectation
from .mpgames import solve_mp_game
from .rational import as_fraction, fraction_str
from .strategy import FiniteMemoryStrategy, complete_strategy


@dataclass(frozen=True)
class BwcInstance:
    arena: Arena
    rnd: RandomizedMemorylessStrategy
    lambda_wc: Fraction
    lambda_exp: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lambda_wc", as_fraction(self.lambda_wc))
        object.__setattr__(self, "lambda_exp", as_fraction(self.lambda_exp))

    @property
    def pure_worst_case(self) -> bool:
        """With lambda_wc >= lambda_exp the expectation demand follows from the
        worst-case one, so the query is a worst-case query only."""
        return self.lambda_wc >= self.lambda_exp


@dataclass(frozen=True)
class BwcCertificate:
    strategy: FiniteMemoryStrategy
    worst_case: Fraction
    expectation: Fraction
    params: tuple[int, int] | None
    pure_worst_case: bool = False


@dataclass(frozen=True)
class NotFound:
    """The thresholds are provably not achievable; ``witness`` says why."""

    reason: str
    witness: dict = field(default_factory=dict)


class CapExceeded(RuntimeError):
    def __init__(self, caps: tuple[int, int], tried: int):
        self.caps, self.tried = caps, tried
        super().__init__(f"no certified (K, L) with K <= {caps[0]}, L <= {caps[1]} ({tried} candidates tried)")


def _block_update(arena: Arena, lam: Fraction, K: int, L: int, m: tuple, s) -> tuple:
    phase = m[0]
    prev = m[-1]
    if prev is None:
        return ("exp", 0, Fraction(0), s)
    w = arena.weight(prev, s)
    if phase == "exp":
        c, total = m[1] + 1, m[2] + w
        if c < K:
            return ("exp", c, total, s)
        return ("exp", 0, Fraction(0), s) if total / K > lam else ("wc", 0, s)
    c = m[1] + 1
    return ("wc", c, s) if c < L else ("exp", 0, Fraction(0), s)


def combined_strategy(
    arena: Arena,
    sigma_wc: FiniteMemoryStrategy,
    sigma_exp: FiniteMemoryStrategy,
    lambda_wc,
    K: int,
    L: int,
) -> FiniteMemoryStrategy:
    """Finite-memory strategy with memory (phase, step count, block sum,
    previous state); only memory values reachable with Adam free are built.

    The memory after observing state ``s`` decides the move from ``s``, so a
    block's verdict takes effect on the very next move.
    """
    if K < 1 or L < 1:
        raise ValueError("K and L must be positive")
    if not (sigma_wc.is_memoryless and sigma_exp.is_memoryless):
        raise ValueError("sigma_wc and sigma_exp must be memoryless")
    lam = as_fraction(lambda_wc)
    wc, ex = sigma_wc.choices(), sigma_exp.choices()
    m0 = ("exp", 0, Fraction(0), None)
    index = {m0: 0}
    labels = [m0]
    update, output = {}, {}
    todo = [(arena.initial, m0)]
    seen = set(todo)
    while todo:
        s, m = todo.pop()
        m2 = _block_update(arena, lam, K, L, m, s)
        if m2 not in index:
            index[m2] = len(labels)
            labels.append(m2)
        update[(index[m], s)] = index[m2]
        if arena.owner[s] is EVE:
            t = ex[s] if m2[0] == "exp" else wc[s]
            output[(index[m], s)] = t
            nexts = (t,)
        else:
            nexts = arena.succ[s]
        for t in nexts:
            if (t, m2) not in seen:
                seen.add((t, m2))
                todo.append((t, m2))
    return complete_strategy(arena, EVE, len(labels), update, output, 0, tuple(labels))


def product_graph(arena: Arena, sigma: FiniteMemoryStrategy) -> tuple[dict, tuple]:
    """Reachable ``(state, memory)`` graph with Adam resolving his choices."""
    start = (arena.initial, sigma.initial_memory)
    g: dict = {}
    todo = [start]
    while todo:
        node = todo.pop()
        if node in g:
            continue
        s, m = node
        m2 = sigma.next_memory(m, s)
        succ = (sigma.move(m, s),) if arena.owner[s] is sigma.player else arena.succ[s]
        g[node] = [((t, m2), arena.weight(s, t)) for t in succ]
        todo.extend(n for n, _ in g[node] if n not in g)
    return g, start


def worst_case_value_of(arena: Arena, sigma: FiniteMemoryStrategy) -> Fraction:
    """Least mean payoff Adam can force against the Eve strategy ``sigma``."""
    if sigma.player is not EVE:
        raise ValueError("sigma must be an Eve strategy")
    g, start = product_graph(arena, sigma)
    return min_mean_values(g)[start]


def search_order(caps: tuple[int, int]):
    kmax, lmax = caps
    for total in range(2, kmax + lmax + 1):
        for K in range(1, min(kmax, total - 1) + 1):
            L = total - K
            if L <= lmax:
                yield K, L


def bwc_synthesize(
    instance: BwcInstance,
    caps: tuple[int, int] = (64, 64),
    sigma_wc: FiniteMemoryStrategy | None = None,
    sigma_exp: FiniteMemoryStrategy | None = None,
) -> BwcCertificate | NotFound:
    """First (K, L) in search order whose combined strategy is verified
    exactly against both thresholds.

    Returns :class:`NotFound` when a threshold is at or above the
    corresponding optimum (no strategy at all can meet it) and raises
    :class:`CapExceeded` when the caps run out without a verdict.
    """
    arena, rnd = instance.arena, instance.rnd
    rnd.check(arena)
    game = solve_mp_game(arena)
    wc_opt = game.value[arena.initial]
    sigma_wc = sigma_wc or game.eve_strategy

    if instance.pure_worst_case:
        wc = worst_case_value_of(arena, sigma_wc)
        if wc > instance.lambda_wc:
            return BwcCertificate(sigma_wc, wc, expected_mp(arena, sigma_wc, rnd), None, True)
        return NotFound(
            "worst-case threshold is not below the optimal worst-case value",
            {"optimal_worst_case": wc_opt, "adam_strategy": game.adam_strategy},
        )
    if instance.lambda_wc >= wc_opt:
        return NotFound(
            "worst-case threshold is not below the optimal worst-case value",
            {"optimal_worst_case": wc_opt, "adam_strategy": game.adam_strategy},
        )
    exp_opt, default_exp = optimal_expectation(arena, rnd)
    if instance.lambda_exp >= exp_opt:
        return NotFound(
            "expectation threshold is not below the optimal expectation",
            {"optimal_expectation": exp_opt},
        )
    sigma_exp = sigma_exp or default_exp

    tried = 0
    for K, L in search_order(caps):
        tried += 1
        strat = combined_strategy(arena, sigma_wc, sigma_exp, instance.lambda_wc, K, L)
        wc = worst_case_value_of(arena, strat)
        if wc <= instance.lambda_wc:
            continue
        ex = expected_mp(arena, strat, rnd)
        if ex > instance.lambda_exp:
            return BwcCertificate(strat, wc, ex, (K, L))
    raise CapExceeded(caps, tried)


def certificate_report(cert: BwcCertificate) -> dict[str, Any]:
    return {
        "worst_case": fraction_str(cert.worst_case),
        "expectation": fraction_str(cert.expectation),
        "K": cert.params[0] if cert.params else None,
        "L": cert.params[1] if cert.params else None,
        "pure_worst_case": cert.pure_worst_case,
    }
