"""Weighted two-player game arenas."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Hashable, Iterable, Mapping

from .rational import as_fraction

State = Hashable


class Player(enum.Enum):
    EVE = "Eve"
    ADAM = "Adam"

    @property
    def opponent(self) -> "Player":
        return Player.ADAM if self is Player.EVE else Player.EVE

    @classmethod
    def parse(cls, value) -> "Player":
        if isinstance(value, Player):
            return value
        if isinstance(value, str):
            for p in cls:
                if value.strip().lower() == p.value.lower():
                    return p
        raise ValueError(f"unknown player {value!r}")

    def __str__(self) -> str:
        return self.value


EVE = Player.EVE
ADAM = Player.ADAM


@dataclass(frozen=True)
class Issue:
    """One violated arena invariant."""

    code: str
    message: str
    state: Any = None
    location: str | None = None

    def __str__(self) -> str:
        where = f"{self.location}: " if self.location else ""
        return f"{where}{self.code}: {self.message}"


class ArenaError(ValueError):
    """Raised with every violated invariant, not just the first one."""

    def __init__(self, issues: Iterable[Issue]):
        self.issues = list(issues)
        super().__init__("; ".join(str(i) for i in self.issues))

    @property
    def codes(self) -> list[str]:
        return [i.code for i in self.issues]


@dataclass(frozen=True)
class Edge:
    src: State
    dst: State
    weight: Fraction = Fraction(0)
    letters: frozenset | None = None


@dataclass(frozen=True, eq=False)
class Arena:
    """A finite arena with a total edge relation.

    Construct through :func:`validate_arena` or :meth:`Arena.build`; both check
    every invariant and raise :class:`ArenaError` listing all violations.
    """

    states: tuple
    owner: Mapping[State, Player]
    edges: tuple[Edge, ...]
    initial: State
    succ: Mapping[State, tuple] = field(init=False, repr=False)
    _weights: Mapping[tuple, Fraction] = field(init=False, repr=False)

    def __post_init__(self):
        succ: dict[State, list] = {s: [] for s in self.states}
        weights: dict[tuple, Fraction] = {}
        for e in self.edges:
            if e.dst not in succ[e.src]:
                succ[e.src].append(e.dst)
            key = (e.src, e.dst)
            if key in weights and weights[key] != e.weight:
                weights[key] = None  # ambiguous in lettered arenas
            elif key not in weights:
                weights[key] = e.weight
        object.__setattr__(self, "succ", {s: tuple(sorted(v)) for s, v in succ.items()})
        object.__setattr__(self, "_weights", weights)

    @classmethod
    def build(cls, owner: Mapping[State, Any], edges: Iterable, initial: State) -> "Arena":
        """Shorthand: ``edges`` holds ``(src, dst)`` or ``(src, dst, weight)``
        (or ``(src, dst, weight, letters)``) tuples."""
        raw = {
            "states": [{"id": s, "owner": str(Player.parse(o))} for s, o in owner.items()],
            "edges": [],
            "initial": initial,
        }
        for e in edges:
            item = {"src": e[0], "dst": e[1]}
            if len(e) > 2:
                item["weight"] = e[2]
            if len(e) > 3 and e[3] is not None:
                item["letters"] = sorted(e[3])
            raw["edges"].append(item)
        return validate_arena(raw)

    # -- queries --------------------------------------------------------

    def weight(self, src: State, dst: State) -> Fraction:
        w = self._weights.get((src, dst))
        if w is None:
            if (src, dst) in self._weights:
                raise ValueError(f"edge {src}->{dst} carries several weights; use letters")
            raise KeyError(f"no edge {src}->{dst}")
        return w

    def has_edge(self, src: State, dst: State) -> bool:
        return (src, dst) in self._weights

    def states_of(self, player: Player) -> tuple:
        return tuple(s for s in self.states if self.owner[s] is player)

    @property
    def lettered(self) -> bool:
        return any(e.letters is not None for e in self.edges)

    @property
    def alphabet(self) -> tuple:
        letters = set()
        for e in self.edges:
            if e.letters:
                letters |= e.letters
        return tuple(sorted(letters))

    def edge_weights(self) -> list[Fraction]:
        return [e.weight for e in self.edges]

    def min_weight(self) -> Fraction:
        return min(self.edge_weights())

    def max_weight(self) -> Fraction:
        return max(self.edge_weights())

    def graph(self, restrict: Iterable[tuple] | None = None) -> dict:
        """Adjacency ``{state: [(succ, weight), ...]}``, optionally restricted
        to a set of ``(src, dst)`` pairs."""
        allowed = None if restrict is None else set(restrict)
        g = {s: [] for s in self.states}
        for s in self.states:
            for t in self.succ[s]:
                if allowed is None or (s, t) in allowed:
                    g[s].append((t, self.weight(s, t)))
        return g

    # -- derived arenas -------------------------------------------------

    def _rebuild(self, owner=None, edges=None, initial=None) -> "Arena":
        return Arena(
            states=self.states,
            owner=dict(owner if owner is not None else self.owner),
            edges=tuple(edges if edges is not None else self.edges),
            initial=self.initial if initial is None else initial,
        )

    def map_weights(self, fn) -> "Arena":
        return self._rebuild(edges=[Edge(e.src, e.dst, as_fraction(fn(e.weight)), e.letters) for e in self.edges])

    def with_owner(self, owner: Mapping[State, Player]) -> "Arena":
        merged = dict(self.owner)
        merged.update({s: Player.parse(p) for s, p in owner.items()})
        return self._rebuild(owner=merged)

    def with_initial(self, initial: State) -> "Arena":
        if initial not in self.owner:
            raise ArenaError([Issue("BadInitial", f"{initial!r} is not a state", initial)])
        return self._rebuild(initial=initial)

    def restricted(self, keep: Iterable[tuple]) -> "Arena":
        """Arena keeping only the listed ``(src, dst)`` edges (validated)."""
        keep = set(keep)
        raw = {
            "states": [{"id": s, "owner": str(self.owner[s])} for s in self.states],
            "edges": [
                {"src": e.src, "dst": e.dst, "weight": e.weight, **({"letters": sorted(e.letters)} if e.letters else {})}
                for e in self.edges
                if (e.src, e.dst) in keep
            ],
            "initial": self.initial,
        }
        return validate_arena(raw)

    def dual(self) -> "Arena":
        """Swap ownership and negate weights: Adam's view of the same game."""
        owner = {s: p.opponent for s, p in self.owner.items()}
        return self._rebuild(owner=owner, edges=[Edge(e.src, e.dst, -e.weight, e.letters) for e in self.edges])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Arena):
            return NotImplemented
        return (
            self.states == other.states
            and dict(self.owner) == dict(other.owner)
            and self.initial == other.initial
            and sorted(self.edges, key=_edge_key) == sorted(other.edges, key=_edge_key)
        )

    def __hash__(self) -> int:
        return hash((self.states, self.initial, len(self.edges)))


def _edge_key(e: Edge):
    return (e.src, e.dst, tuple(sorted(e.letters)) if e.letters else ())


def _sort_states(ids: list) -> tuple:
    try:
        return tuple(sorted(ids))
    except TypeError:
        return tuple(sorted(ids, key=repr))


def validate_arena(raw: Mapping) -> Arena:
    """Build an :class:`Arena` from a plain description.

    ``raw`` has ``states`` (list of ``{"id", "owner"}``), ``edges`` (list of
    ``{"src", "dst", "weight"?, "letters"?}``) and ``initial``.  Optional
    ``locations`` maps ``("states", i)``/``("edges", i)`` to text positions
    used in the error report.
    """
    issues: list[Issue] = []
    loc = raw.get("locations", {})

    def where(kind, i):
        return loc.get((kind, i), f"{kind}[{i}]")

    owner: dict = {}
    index: dict = {}
    for i, item in enumerate(raw.get("states") or []):
        sid = item.get("id")
        if sid is None:
            issues.append(Issue("UnknownState", "state entry without id", None, where("states", i)))
            continue
        if sid in owner:
            issues.append(Issue("DuplicateState", f"state {sid!r} declared twice", sid, where("states", i)))
            continue
        try:
            index[sid] = i
            owner[sid] = Player.parse(item.get("owner"))
        except ValueError:
            issues.append(Issue("BadOwner", f"state {sid!r} has owner {item.get('owner')!r}", sid, where("states", i)))
            owner[sid] = None
    if not owner:
        issues.append(Issue("EmptyArena", "the arena has no states"))

    edges: list[Edge] = []
    seen: dict = {}
    for i, item in enumerate(raw.get("edges") or []):
        src, dst = item.get("src"), item.get("dst")
        bad = False
        for end in (src, dst):
            if end not in owner:
                issues.append(Issue("UnknownState", f"edge mentions unknown state {end!r}", end, where("edges", i)))
                bad = True
        try:
            weight = as_fraction(item.get("weight", 0))
        except (TypeError, ValueError) as exc:
            issues.append(Issue("BadWeight", str(exc), src, where("edges", i)))
            bad = True
            weight = Fraction(0)
        letters = item.get("letters")
        if letters is not None:
            letters = frozenset(letters)
        if bad:
            continue
        keys = [(src, dst, None)] if letters is None else [(src, dst, a) for a in letters]
        dup = [k for k in keys if k in seen]
        if dup:
            issues.append(Issue("DuplicateEdge", f"edge {src!r}->{dst!r} given twice", src, where("edges", i)))
            continue
        for k in keys:
            seen[k] = i
        edges.append(Edge(src, dst, weight, letters))

    has_plain = any(e.letters is None for e in edges)
    has_letters = any(e.letters is not None for e in edges)
    if has_plain and has_letters:
        issues.append(Issue("MixedLetters", "either every edge carries letters or none does"))

    outgoing = {s: 0 for s in owner}
    for e in edges:
        outgoing[e.src] += 1
    for s, n in outgoing.items():
        if n == 0:
            issues.append(Issue("NonTotalEdgeRelation", f"state {s!r} has no outgoing edge", s, where("states", index[s])))

    initial = raw.get("initial")
    if initial not in owner:
        issues.append(Issue("BadInitial", f"initial state {initial!r} is not declared", initial, loc.get("initial")))

    if issues:
        raise ArenaError(issues)
    return Arena(states=_sort_states(list(owner)), owner=owner, edges=tuple(edges), initial=initial)
