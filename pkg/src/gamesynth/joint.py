"""Lazy enumeration of adversary strategies against fixed strategies.

The adversary's transducer table starts empty.  Every play that needs it
is simulated; the first missing entry (a memory update or a move) becomes a
branching point, and each option is explored in turn.  A leaf is reached once
every play is fully determined, so each leaf stands for the whole class of
adversaries agreeing on the entries that matter.  Fresh memory values are
introduced in order, which removes renamings.

Optionally a further "free" strategy for the fixed player is enumerated the
same way, with moves keyed by (state, adversary memory).  Such strategies
cover all best responses against the adversary.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .arena import Arena, Player
from .play import Lasso
from .strategy import FiniteMemoryStrategy, complete_strategy


@dataclass(frozen=True)
class JointLeaf:
    adversary: FiniteMemoryStrategy
    outcomes: tuple  # one lasso per fixed strategy
    free_outcome: Lasso | None
    free_moves: dict | None


class _Hole(Exception):
    def __init__(self, kind: str, key: tuple):
        self.kind, self.key = kind, key


def _play(arena, adv: Player, upd, out, fixed: FiniteMemoryStrategy | None, free) -> Lasso:
    s = arena.initial
    mf = fixed.initial_memory if fixed is not None else 0
    ma = 0
    index: dict = {}
    states = []
    while (s, mf, ma) not in index:
        index[(s, mf, ma)] = len(states)
        states.append(s)
        if (ma, s) not in upd:
            raise _Hole("update", (ma, s))
        if arena.owner[s] is adv:
            if (ma, s) not in out:
                raise _Hole("output", (ma, s))
            t = out[(ma, s)]
        elif fixed is not None:
            t = fixed.move(mf, s)
        else:
            if (s, ma) not in free:
                raise _Hole("free", (s, ma))
            t = free[(s, ma)]
        mf = fixed.next_memory(mf, s) if fixed is not None else 0
        s, ma = t, upd[(ma, s)]
    start = index[(s, mf, ma)]
    return Lasso(states[:start], states[start:]).normalized()


def joint_outcomes(
    arena: Arena,
    fixed: Sequence[FiniteMemoryStrategy],
    adversary_bound: int,
    with_free: bool = False,
    adversary: Player | None = None,
) -> Iterator[JointLeaf]:
    """Every distinct joint behaviour of an adversary with memory at most
    ``adversary_bound`` against each strategy in ``fixed`` (and, with
    ``with_free``, against one more memoryless-over-adversary-memory strategy
    of the fixed player)."""
    if adversary_bound < 1:
        raise ValueError("adversary bound must be at least 1")
    if adversary is None:
        if not fixed:
            raise ValueError("need a fixed strategy or an explicit adversary")
        adversary = fixed[0].player.opponent
    upd: dict = {}
    out: dict = {}
    free: dict = {}

    def used() -> int:
        return max(upd.values(), default=0) + 1

    def search():
        try:
            lassos = tuple(_play(arena, adversary, upd, out, f, None) for f in fixed)
            free_lasso = _play(arena, adversary, upd, out, None, free) if with_free else None
        except _Hole as hole:
            if hole.kind == "update":
                table, options = upd, range(min(used() + 1, adversary_bound))
            elif hole.kind == "output":
                table, options = out, arena.succ[hole.key[1]]
            else:
                table, options = free, arena.succ[hole.key[0]]
            for v in options:
                table[hole.key] = v
                yield from search()
            del table[hole.key]
            return
        strat = complete_strategy(arena, adversary, used(), dict(upd), dict(out))
        yield JointLeaf(strat, lassos, free_lasso, dict(free) if with_free else None)

    yield from search()
