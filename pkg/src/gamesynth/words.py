"""Weighted automata and regret of on-line resolvers of nondeterminism.

The adversary picks an ultimately periodic word ``u·v^ω``; the automaton's
value on it is the best value of any run, while the resolver builds a run
letter by letter.  Regret is bounded-exact: only words with ``|u|, |v| <=
lasso_bound`` are inspected.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from .graphs import one_player_values
from .play import PayoffKind
from .rational import as_fraction
from .regret import AdversaryClass, RegretReport


@dataclass(frozen=True)
class Transition:
    src: object
    letter: str
    dst: object
    weight: Fraction


@dataclass(frozen=True, eq=False)
class WeightedAutomaton:
    states: tuple
    initial: object
    alphabet: tuple
    transitions: tuple

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "alphabet", tuple(sorted(self.alphabet)))
        trans = tuple(
            t if isinstance(t, Transition) else Transition(t[0], t[1], t[2], as_fraction(t[3])) for t in self.transitions
        )
        object.__setattr__(self, "transitions", trans)
        known = set(self.states)
        if self.initial not in known:
            raise ValueError(f"initial state {self.initial!r} is not a state")
        for t in trans:
            if t.src not in known or t.dst not in known:
                raise ValueError(f"transition {t} mentions an unknown state")
            if t.letter not in self.alphabet:
                raise ValueError(f"transition {t} uses a letter outside the alphabet")
        by = {}
        for t in trans:
            by.setdefault((t.src, t.letter), []).append(t)
        for q in self.states:
            for a in self.alphabet:
                if (q, a) not in by:
                    raise ValueError(f"no transition from {q!r} on {a!r}")
        object.__setattr__(self, "_by", {k: tuple(v) for k, v in by.items()})

    def options(self, q, a) -> tuple:
        return self._by[(q, a)]

    @property
    def deterministic(self) -> bool:
        return all(len(v) == 1 for v in self._by.values())

    def __eq__(self, other):
        if not isinstance(other, WeightedAutomaton):
            return NotImplemented
        return (
            self.states == other.states
            and self.initial == other.initial
            and self.alphabet == other.alphabet
            and set(self.transitions) == set(other.transitions)
        )

    def __hash__(self):
        return hash((self.states, self.initial, self.alphabet))


@dataclass(frozen=True)
class LassoWord:
    stem: tuple
    cycle: tuple

    def letter(self, pos: int) -> str:
        return self.stem[pos] if pos < len(self.stem) else self.cycle[(pos - len(self.stem)) % len(self.cycle)]

    def next_pos(self, pos: int) -> int:
        n = len(self.stem) + len(self.cycle)
        return pos + 1 if pos + 1 < n else len(self.stem)

    def normalized(self) -> "LassoWord":
        c = self.cycle
        for p in range(1, len(c) + 1):
            if len(c) % p == 0 and c == c[:p] * (len(c) // p):
                c = c[:p]
                break
        s = self.stem
        while s and s[-1] == c[-1]:
            s, c = s[:-1], (c[-1],) + c[:-1]
        return LassoWord(s, c)

    def same_word(self, other: "LassoWord") -> bool:
        return self.normalized() == other.normalized()

    def __str__(self) -> str:
        return f"{''.join(self.stem)}({''.join(self.cycle)})^w"


@dataclass(frozen=True)
class WordStrategy:
    """Resolver: in memory ``m`` at state ``q`` reading ``a`` it takes
    ``choice[(m, q, a)]`` and moves to memory ``update[(m, q, a)]``."""

    memory_size: int
    choice: Mapping
    update: Mapping = field(default_factory=dict)
    initial_memory: int = 0

    def step(self, m, q, a):
        return self.choice[(m, q, a)], self.update.get((m, q, a), m)


def positional_resolver(aut: WeightedAutomaton, pick: Mapping | None = None) -> WordStrategy:
    """Memoryless resolver; ``pick`` maps ``(q, a)`` to a target state, other
    pairs take their first transition."""
    pick = dict(pick or {})
    choice = {}
    for q in aut.states:
        for a in aut.alphabet:
            opts = aut.options(q, a)
            want = pick.get((q, a))
            choice[(0, q, a)] = next(t for t in opts if t.dst == want) if want is not None else opts[0]
    return WordStrategy(1, choice)


def lasso_words(alphabet: Iterable[str], bound: int) -> Iterator[LassoWord]:
    """Words ``u·v^ω`` with ``|u| <= bound`` and ``1 <= |v| <= bound``, by
    total length, then stem length, then lexicographically."""
    alphabet = tuple(sorted(alphabet))
    for total in range(1, 2 * bound + 1):
        for su in range(0, min(bound, total - 1) + 1):
            sv = total - su
            if sv > bound:
                continue
            for u in itertools.product(alphabet, repeat=su):
                for v in itertools.product(alphabet, repeat=sv):
                    yield LassoWord(u, v)


def _value(weights: list, start: int, kind: PayoffKind) -> Fraction:
    cyc = weights[start:]
    if kind is PayoffKind.MP:
        return Fraction(sum(cyc, Fraction(0)), len(cyc))
    if kind is PayoffKind.LIMINF:
        return min(cyc)
    if kind is PayoffKind.LIMSUP:
        return max(cyc)
    return min(weights) if kind is PayoffKind.INF else max(weights)


def word_value(aut: WeightedAutomaton, word: LassoWord, kind=PayoffKind.MP) -> Fraction:
    """Best value over all runs of ``aut`` on ``word``."""
    kind = PayoffKind.parse(kind)
    start = (aut.initial, 0)
    g: dict = {}
    todo = [start]
    while todo:
        node = todo.pop()
        if node in g:
            continue
        q, pos = node
        a, nxt = word.letter(pos), word.next_pos(pos)
        g[node] = [((t.dst, nxt), t.weight) for t in aut.options(q, a)]
        todo.extend(n for n, _ in g[node] if n not in g)
    return one_player_values(g, kind, True)[start]


def run_value(aut: WeightedAutomaton, sigma: WordStrategy, word: LassoWord, kind=PayoffKind.MP) -> Fraction:
    """Value of the run the resolver builds on ``word``."""
    kind = PayoffKind.parse(kind)
    q, m, pos = aut.initial, sigma.initial_memory, 0
    seen: dict = {}
    weights = []
    while (q, m, pos) not in seen:
        seen[(q, m, pos)] = len(weights)
        t, m2 = sigma.step(m, q, word.letter(pos))
        weights.append(t.weight)
        q, m, pos = t.dst, m2, word.next_pos(pos)
    return _value(weights, seen[(q, m, pos)], kind)


def exact_lasso_bound(aut: WeightedAutomaton, sigma: WordStrategy) -> int:
    return len(aut.states) ** 2 * sigma.memory_size


def _word_table(aut: WeightedAutomaton, kind: PayoffKind, lasso_bound: int) -> list:
    return [(w, word_value(aut, w, kind)) for w in lasso_words(aut.alphabet, lasso_bound)]


def _scan(aut, sigma, kind, table, cutoff):
    best = None
    for word, top in table:
        got = run_value(aut, sigma, word, kind)
        if best is None or top - got > best[0]:
            best = (top - got, word, top, got)
            if cutoff is not None and best[0] >= cutoff:
                break
    return best


def regret_vs_words(aut: WeightedAutomaton, sigma: WordStrategy, kind=PayoffKind.MP, lasso_bound: int = 4) -> RegretReport:
    """Largest gap between the automaton's value and the resolver's run value
    over bounded lasso words (first maximizing word in enumeration order)."""
    if lasso_bound < 1:
        raise ValueError("lasso bound must be at least 1")
    kind = PayoffKind.parse(kind)
    best = _scan(aut, sigma, kind, _word_table(aut, kind, lasso_bound), None)
    bounds = {"lasso_bound": lasso_bound, "exact_bound": exact_lasso_bound(aut, sigma)}
    return RegretReport(best[0], best[1], best[2], best[3], AdversaryClass.WORDS, bounds)


def enumerate_resolvers(aut: WeightedAutomaton, memory_bound: int) -> Iterator[WordStrategy]:
    """Resolvers with at most ``memory_bound`` memory states, up to renaming
    and unreachable entries; (state, memory) pairs are discovered breadth
    first."""
    if memory_bound < 1:
        raise ValueError("memory bound must be at least 1")
    order = [(aut.initial, 0)]
    seen = {order[0]}
    choice: dict = {}
    update: dict = {}

    def complete(used):
        ch, up = dict(choice), dict(update)
        for m in range(used):
            for q in aut.states:
                for a in aut.alphabet:
                    ch.setdefault((m, q, a), aut.options(q, a)[0])
                    up.setdefault((m, q, a), m)
        return WordStrategy(used, ch, up)

    keys = []

    def extend(i: int, j: int, used: int):
        if i == len(order):
            yield complete(used)
            return
        q, m = order[i]
        if j == len(aut.alphabet):
            yield from extend(i + 1, 0, used)
            return
        a = aut.alphabet[j]
        for t in aut.options(q, a):
            for m2 in range(min(used + 1, memory_bound)):
                node = (t.dst, m2)
                fresh = node not in seen
                if fresh:
                    seen.add(node)
                    order.append(node)
                choice[(m, q, a)], update[(m, q, a)] = t, m2
                yield from extend(i, j + 1, max(used, m2 + 1))
                del choice[(m, q, a)], update[(m, q, a)]
                if fresh:
                    order.pop()
                    seen.discard(node)

    yield from extend(0, 0, 1)


def min_regret_words(aut: WeightedAutomaton, kind=PayoffKind.MP, memory_bound: int = 1, lasso_bound: int = 4):
    """Least bounded word regret over resolvers with memory at most
    ``memory_bound``; returns ``(report, resolver)``.  Resolvers are compared
    with a running cutoff, so a worse one is abandoned early; smaller
    resolvers come first."""
    if lasso_bound < 1:
        raise ValueError("lasso bound must be at least 1")
    kind = PayoffKind.parse(kind)
    table = _word_table(aut, kind, lasso_bound)
    best = None
    candidates = (r for size in range(1, memory_bound + 1) for r in enumerate_resolvers(aut, size) if r.memory_size == size)
    for sigma in candidates:
        found = _scan(aut, sigma, kind, table, None if best is None else best[0][0])
        if best is None or found[0] < best[0][0]:
            best = (found, sigma)
            if found[0] == 0:
                break
    (gap, word, top, got), sigma = best
    bounds = {"lasso_bound": lasso_bound, "exact_bound": exact_lasso_bound(aut, sigma), "memory_bound": memory_bound}
    return RegretReport(gap, word, top, got, AdversaryClass.WORDS, bounds), sigma


def is_alpha_gfg(aut: WeightedAutomaton, alpha, m: int = 1, lasso_bound: int = 4) -> bool:
    return min_regret_words(aut, PayoffKind.MP, m, lasso_bound)[0].regret <= as_fraction(alpha)


def is_det_by_pruning(aut: WeightedAutomaton, alpha, k: int = 0, lasso_bound: int = 4) -> bool:
    return min_regret_words(aut, PayoffKind.MP, 2 ** k, lasso_bound)[0].regret <= as_fraction(alpha)
