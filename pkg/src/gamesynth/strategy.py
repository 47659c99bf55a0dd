"""Finite-memory strategies (Mealy machines over visited states).

Convention used everywhere: at position ``i`` the machine is in memory
``m_i`` (having consumed ``s_0 .. s_{i-1}``).  If the owner of ``s_i`` is the
strategy's player it moves to ``output(m_i, s_i)``; in every case the memory
then becomes ``update(m_i, s_i)``.  Memory ``0`` is initial unless stated
otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterator, Mapping

from .arena import Arena, Player, State


@dataclass(frozen=True, eq=False)
class FiniteMemoryStrategy:
    player: Player
    memory_size: int
    update: Mapping[tuple[int, State], int]
    output: Mapping[tuple[int, State], State]
    initial_memory: int = 0
    labels: tuple | None = field(default=None, compare=False)

    def next_memory(self, m: int, s: State) -> int:
        return self.update[(m, s)]

    def move(self, m: int, s: State) -> State:
        return self.output[(m, s)]

    @property
    def is_memoryless(self) -> bool:
        return self.memory_size == 1

    def choices(self) -> dict:
        """Successor map of a memoryless strategy."""
        if not self.is_memoryless:
            raise ValueError("strategy has memory")
        return {s: t for (m, s), t in sorted(self.output.items(), key=lambda kv: _state_key(kv[0][1]))}

    def key(self) -> tuple:
        return (
            self.player.value,
            self.memory_size,
            self.initial_memory,
            tuple(sorted(((m, repr(s)), v) for (m, s), v in self.update.items())),
            tuple(sorted(((m, repr(s)), repr(v)) for (m, s), v in self.output.items())),
        )

    def __eq__(self, other):
        if not isinstance(other, FiniteMemoryStrategy):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self) -> str:
        if self.is_memoryless:
            body = ", ".join(f"{s}->{t}" for s, t in self.choices().items())
            return f"Memoryless[{self.player}]({body})"
        return f"FiniteMemoryStrategy[{self.player}](memory={self.memory_size})"


def _state_key(s):
    return (0, s, "") if isinstance(s, (int, float)) else (1, 0, repr(s))


def complete_strategy(
    arena: Arena,
    player: Player,
    memory_size: int,
    update: Mapping,
    output: Mapping,
    initial_memory: int = 0,
    labels: tuple | None = None,
) -> FiniteMemoryStrategy:
    """Fill missing table entries (memory stays put, lowest successor) and
    check that every move is an edge of ``arena``."""
    upd, out = {}, {}
    for m in range(memory_size):
        for s in arena.states:
            nm = update.get((m, s), m)
            if not 0 <= nm < memory_size:
                raise ValueError(f"update({m}, {s!r}) = {nm} outside memory")
            upd[(m, s)] = nm
            if arena.owner[s] is player:
                t = output.get((m, s), arena.succ[s][0])
                if not arena.has_edge(s, t):
                    raise ValueError(f"output({m}, {s!r}) = {t!r} is not an edge")
                out[(m, s)] = t
    return FiniteMemoryStrategy(player, memory_size, upd, out, initial_memory, labels)


def memoryless(arena: Arena, player: Player, choices: Mapping[State, State] | None = None) -> FiniteMemoryStrategy:
    """Memoryless strategy from a partial successor map (missing states take
    their lowest successor)."""
    choices = dict(choices or {})
    for s in choices:
        if arena.owner.get(s) is not player:
            raise ValueError(f"state {s!r} is not owned by {player}")
    return complete_strategy(arena, player, 1, {}, {(0, s): t for s, t in choices.items()})


def enumerate_strategies(arena: Arena, player: Player, memory_bound: int) -> Iterator[FiniteMemoryStrategy]:
    """All strategies of ``player`` with at most ``memory_bound`` memory states,
    up to renaming of memory and up to entries that no play can reach.

    Configurations ``(state, memory)`` are discovered breadth-first from the
    initial one with the opponent left free; each new configuration branches on
    its memory update (existing values or the next fresh one) and, at owned
    states, on its successor.  Order is deterministic.
    """
    if memory_bound < 1:
        raise ValueError("memory bound must be at least 1")
    order = [(arena.initial, 0)]
    seen = {order[0]}
    update: dict = {}
    output: dict = {}

    def extend(i: int, used: int):
        if i == len(order):
            yield complete_strategy(arena, player, used, update, output)
            return
        s, m = order[i]
        owned = arena.owner[s] is player
        moves = arena.succ[s] if owned else (None,)
        for m2 in range(min(used + 1, memory_bound)):
            for t in moves:
                nexts = (t,) if owned else arena.succ[s]
                fresh = []
                for x in nexts:
                    c = (x, m2)
                    if c not in seen:
                        seen.add(c)
                        fresh.append(c)
                order.extend(fresh)
                update[(m, s)] = m2
                if owned:
                    output[(m, s)] = t
                yield from extend(i + 1, max(used, m2 + 1))
                del update[(m, s)]
                output.pop((m, s), None)
                if fresh:
                    del order[-len(fresh):]
                    seen.difference_update(fresh)

    yield from extend(0, 1)


def enumerate_by_memory(arena: Arena, player: Player, memory_bound: int) -> Iterator[FiniteMemoryStrategy]:
    """The strategies of :func:`enumerate_strategies`, smallest memory first."""
    for size in range(1, memory_bound + 1):
        for sigma in enumerate_strategies(arena, player, size):
            if sigma.memory_size == size:
                yield sigma


def strategy_table(strategy: FiniteMemoryStrategy) -> dict[str, Any]:
    """Transducer table for serialization."""
    return {
        "player": strategy.player.value,
        "memory": strategy.memory_size,
        "initial_memory": strategy.initial_memory,
        "update": [[m, s, v] for (m, s), v in sorted(strategy.update.items(), key=lambda kv: (kv[0][0], repr(kv[0][1])))],
        "output": [[m, s, v] for (m, s), v in sorted(strategy.output.items(), key=lambda kv: (kv[0][0], repr(kv[0][1])))],
    }


def strategy_from_table(arena: Arena, table: Mapping) -> FiniteMemoryStrategy:
    player = Player.parse(table["player"])
    size = int(table.get("memory", 1))
    update = {(int(m), s): int(v) for m, s, v in table.get("update", [])}
    output = {(int(m), s): v for m, s, v in table.get("output", [])}
    return complete_strategy(arena, player, size, update, output, int(table.get("initial_memory", 0)))
