"""Plays as lassos, payoff functions, and Büchi objectives."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Sequence

from .arena import ADAM, EVE, Arena, Player
from .strategy import FiniteMemoryStrategy


class PayoffKind(enum.Enum):
    MP = "MP"
    INF = "Inf"
    SUP = "Sup"
    LIMINF = "LimInf"
    LIMSUP = "LimSup"

    @classmethod
    def parse(cls, value) -> "PayoffKind":
        if isinstance(value, PayoffKind):
            return value
        for k in cls:
            if str(value).strip().lower() == k.value.lower():
                return k
        raise ValueError(f"unknown payoff kind {value!r}")

    @property
    def dual(self) -> "PayoffKind":
        """Kind ``k'`` with ``min_k(w) = -max_k'(-w)`` over the same plays."""
        return {
            PayoffKind.MP: PayoffKind.MP,
            PayoffKind.INF: PayoffKind.SUP,
            PayoffKind.SUP: PayoffKind.INF,
            PayoffKind.LIMINF: PayoffKind.LIMSUP,
            PayoffKind.LIMSUP: PayoffKind.LIMINF,
        }[self]


@dataclass(frozen=True)
class Lasso:
    """Ultimately periodic play ``stem · cycle^ω``."""

    stem: tuple
    cycle: tuple

    def __post_init__(self):
        object.__setattr__(self, "stem", tuple(self.stem))
        object.__setattr__(self, "cycle", tuple(self.cycle))
        if not self.cycle:
            raise ValueError("lasso cycle must be nonempty")

    def normalized(self) -> "Lasso":
        """Shortest stem and primitive cycle describing the same play."""
        cycle = self.cycle
        n = len(cycle)
        for p in range(1, n + 1):
            if n % p == 0 and cycle == cycle[:p] * (n // p):
                cycle = cycle[:p]
                break
        stem = self.stem
        while stem and stem[-1] == cycle[-1]:
            stem = stem[:-1]
            cycle = (cycle[-1],) + cycle[:-1]
        return Lasso(stem, cycle)

    def prefix(self, n: int) -> list:
        out = list(self.stem[:n])
        while len(out) < n:
            k = len(out) - len(self.stem)
            out.append(self.cycle[k % len(self.cycle)])
        return out

    def stem_edges(self) -> list[tuple]:
        seq = list(self.stem) + [self.cycle[0]]
        return list(zip(seq, seq[1:]))

    def cycle_edges(self) -> list[tuple]:
        c = self.cycle
        return [(c[i], c[(i + 1) % len(c)]) for i in range(len(c))]

    def same_play(self, other: "Lasso") -> bool:
        return self.normalized() == other.normalized()

    def __str__(self) -> str:
        stem = " ".join(map(str, self.stem))
        cyc = " ".join(map(str, self.cycle))
        return f"{stem} ({cyc})^w" if stem else f"({cyc})^w"


def lasso_value(weight: Callable[[Hashable, Hashable], Fraction], lasso: Lasso, kind: PayoffKind) -> Fraction:
    """Value of a lasso over any weighted graph."""
    cyc = [weight(u, v) for u, v in lasso.cycle_edges()]
    if kind is PayoffKind.MP:
        return Fraction(sum(cyc, Fraction(0)), len(cyc))
    if kind is PayoffKind.LIMINF:
        return min(cyc)
    if kind is PayoffKind.LIMSUP:
        return max(cyc)
    allw = cyc + [weight(u, v) for u, v in lasso.stem_edges()]
    return min(allw) if kind is PayoffKind.INF else max(allw)


def payoff(arena: Arena, lasso: Lasso, kind: PayoffKind = PayoffKind.MP) -> Fraction:
    return lasso_value(arena.weight, lasso, PayoffKind.parse(kind))


def check_lasso(arena: Arena, lasso: Lasso) -> None:
    for u, v in lasso.stem_edges() + lasso.cycle_edges():
        if not arena.has_edge(u, v):
            raise ValueError(f"{u!r}->{v!r} is not an edge")


def outcome_trace(arena: Arena, sigma: FiniteMemoryStrategy, tau: FiniteMemoryStrategy) -> tuple[list, int]:
    """Joint configurations ``(state, eve memory, adam memory)`` from the
    initial one up to the first repetition, and the index where the cycle
    starts."""
    if sigma.player is not EVE or tau.player is not ADAM:
        raise ValueError("expected an Eve strategy and an Adam strategy")
    s, me, ma = arena.initial, sigma.initial_memory, tau.initial_memory
    index: dict = {}
    trace = []
    while (s, me, ma) not in index:
        index[(s, me, ma)] = len(trace)
        trace.append((s, me, ma))
        if arena.owner[s] is EVE:
            t = sigma.move(me, s)
        else:
            t = tau.move(ma, s)
        s, me, ma = t, sigma.next_memory(me, s), tau.next_memory(ma, s)
    return trace, index[(s, me, ma)]


def outcome_lasso(arena: Arena, sigma: FiniteMemoryStrategy, tau: FiniteMemoryStrategy) -> Lasso:
    trace, start = outcome_trace(arena, sigma, tau)
    states = [c[0] for c in trace]
    return Lasso(states[:start], states[start:]).normalized()


def outcome_of(arena: Arena, a: FiniteMemoryStrategy, b: FiniteMemoryStrategy) -> Lasso:
    """``outcome_lasso`` taking the two strategies in either order."""
    return outcome_lasso(arena, a, b) if a.player is EVE else outcome_lasso(arena, b, a)


@dataclass(frozen=True)
class BuchiObjective:
    """Plays visiting ``target`` infinitely often."""

    target: frozenset

    def __init__(self, target: Iterable):
        object.__setattr__(self, "target", frozenset(target))

    def check(self, arena: Arena) -> None:
        unknown = [s for s in self.target if s not in arena.owner]
        if unknown:
            raise ValueError(f"objective mentions unknown states {unknown!r}")

    def satisfied(self, lasso: Lasso) -> bool:
        return not self.target.isdisjoint(lasso.cycle)


def winner_of(obj: BuchiObjective, lasso: Lasso) -> Player:
    return EVE if obj.satisfied(lasso) else ADAM


def unroll_weights(arena: Arena, lasso: Lasso, n: int) -> list[Fraction]:
    seq: Sequence = lasso.prefix(n + 1)
    return [arena.weight(u, v) for u, v in zip(seq, seq[1:])]
