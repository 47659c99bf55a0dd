"""JSON documents for arenas and weighted automata.

Numbers are exact: weights and probabilities may be JSON integers, decimal
literals (read exactly, never through float) or strings such as ``"9/10"``.
Serialization always writes fraction strings.  Arena document::

    {"format_version": 1,
     "states": [{"id": 1, "owner": "Eve"}, ...],
     "edges": [{"src": 1, "dst": 2, "weight": "0", "letters": ["a"]}, ...],
     "initial": 1,
     "objectives": {"eve": [4], "adam": [3]},
     "adversary": {"3": {"1": "9/10", "2": "1/10"}}}

Automaton document: ``"kind": "automaton"`` with ``states``, ``initial``,
``alphabet`` and ``transitions`` (``src``, ``letter``, ``dst``, ``weight``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from .admissibility import ObjectivePair
from .arena import Arena, ArenaError, Issue, validate_arena
from .mdp import RandomizedMemorylessStrategy, SupportViolation
from .play import BuchiObjective
from .rational import fraction_str
from .words import WeightedAutomaton

FORMAT_VERSION = 1


class DocumentError(ValueError):
    """Malformed document: syntax errors carry line and column."""


@dataclass(frozen=True)
class ArenaBundle:
    arena: Arena
    rnd: RandomizedMemorylessStrategy | None = None
    objectives: dict = field(default_factory=dict)

    @property
    def objective_pair(self) -> ObjectivePair | None:
        if "eve" in self.objectives and "adam" in self.objectives:
            return ObjectivePair(self.objectives["eve"], self.objectives["adam"])
        return None


def _loads(text: str) -> Any:
    try:
        return json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _line_col(text: str, pos: int) -> str:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return f"line {line}, column {col}"


def _element_locations(text: str) -> dict:
    """Text positions of the items of the top-level ``states`` and ``edges``
    arrays, plus the ``initial`` value; the text is known to be valid JSON."""
    dec = json.JSONDecoder(parse_float=Fraction)
    ws = " \t\r\n"
    out: dict = {}

    def skip(i):
        while i < len(text) and text[i] in ws:
            i += 1
        return i

    i = skip(0)
    if i >= len(text) or text[i] != "{":
        return out
    i = skip(i + 1)
    while i < len(text) and text[i] != "}":
        key, i = dec.raw_decode(text, i)
        i = skip(skip(i) + 1)  # past ':'
        if key in ("states", "edges") and text[i] == "[":
            j = skip(i + 1)
            k = 0
            while text[j] != "]":
                out[(key, k)] = _line_col(text, j)
                _, j = dec.raw_decode(text, j)
                j = skip(j)
                if text[j] == ",":
                    j = skip(j + 1)
                k += 1
            i = j + 1
        else:
            if key == "initial":
                out["initial"] = _line_col(text, i)
            _, i = dec.raw_decode(text, i)
        i = skip(i)
        if i < len(text) and text[i] == ",":
            i = skip(i + 1)
    return out


def _check_version(doc) -> None:
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    version = doc.get("format_version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise DocumentError(f"unsupported format_version {version!r}")


def _state_lookup(arena: Arena) -> dict:
    return {str(s): s for s in arena.states}


def resolve_state(arena: Arena, token):
    """Map a state id as written in a document or on the command line."""
    if token in arena.owner:
        return token
    table = _state_lookup(arena)
    if str(token) in table:
        return table[str(token)]
    raise ArenaError([Issue("UnknownState", f"unknown state {token!r}", token)])


def bundle_from_document(doc: dict, locations: dict | None = None) -> ArenaBundle:
    _check_version(doc)
    raw = {
        "states": doc.get("states") or [],
        "edges": doc.get("edges") or [],
        "initial": doc.get("initial"),
        "locations": locations or {},
    }
    arena = validate_arena(raw)
    objectives = {}
    for name, target in (doc.get("objectives") or {}).items():
        obj = BuchiObjective(resolve_state(arena, s) for s in target)
        objectives[name] = obj
    rnd = None
    if doc.get("adversary") is not None:
        dist = {}
        for s, row in doc["adversary"].items():
            dist[resolve_state(arena, s)] = {resolve_state(arena, t): p for t, p in row.items()}
        rnd = RandomizedMemorylessStrategy(dist)
        rnd.check(arena)
    return ArenaBundle(arena, rnd, objectives)


def parse_arena(text: str) -> ArenaBundle:
    doc = _loads(text)
    _check_version(doc)
    return bundle_from_document(doc, _element_locations(text))


def arena_document(bundle: ArenaBundle) -> dict:
    arena = bundle.arena
    doc: dict = {
        "format_version": FORMAT_VERSION,
        "states": [{"id": s, "owner": str(arena.owner[s])} for s in arena.states],
        "edges": [],
        "initial": arena.initial,
    }
    for e in arena.edges:
        item = {"src": e.src, "dst": e.dst, "weight": fraction_str(e.weight)}
        if e.letters is not None:
            item["letters"] = sorted(e.letters)
        doc["edges"].append(item)
    if bundle.objectives:
        doc["objectives"] = {n: sorted(o.target, key=arena.states.index) for n, o in bundle.objectives.items()}
    if bundle.rnd is not None:
        doc["adversary"] = {
            str(s): {str(t): fraction_str(p) for t, p in sorted(row.items(), key=lambda kv: arena.states.index(kv[0]))}
            for s, row in sorted(bundle.rnd.dist.items(), key=lambda kv: arena.states.index(kv[0]))
        }
    return doc


def serialize_arena(bundle: ArenaBundle) -> str:
    return json.dumps(arena_document(bundle), indent=2) + "\n"


def load_arena(path) -> ArenaBundle:
    return parse_arena(Path(path).read_text(encoding="utf-8"))


def parse_automaton(text: str) -> WeightedAutomaton:
    doc = _loads(text)
    _check_version(doc)
    if doc.get("kind") != "automaton":
        raise DocumentError('automaton documents need "kind": "automaton"')
    try:
        trans = [(t["src"], t["letter"], t["dst"], t.get("weight", 0)) for t in doc["transitions"]]
        return WeightedAutomaton(tuple(doc["states"]), doc["initial"], tuple(doc["alphabet"]), tuple(trans))
    except KeyError as exc:
        raise DocumentError(f"missing field {exc.args[0]!r}") from None


def automaton_document(aut: WeightedAutomaton) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "kind": "automaton",
        "states": list(aut.states),
        "initial": aut.initial,
        "alphabet": list(aut.alphabet),
        "transitions": [
            {"src": t.src, "letter": t.letter, "dst": t.dst, "weight": fraction_str(t.weight)} for t in aut.transitions
        ],
    }


def serialize_automaton(aut: WeightedAutomaton) -> str:
    return json.dumps(automaton_document(aut), indent=2) + "\n"


def load_automaton(path) -> WeightedAutomaton:
    return parse_automaton(Path(path).read_text(encoding="utf-8"))


def load_document(path):
    """Arena bundle or automaton, by the document's ``kind``."""
    text = Path(path).read_text(encoding="utf-8")
    doc = _loads(text)
    if isinstance(doc, dict) and doc.get("kind") == "automaton":
        return parse_automaton(text)
    return parse_arena(text)


__all__ = [
    "ArenaBundle", "DocumentError", "SupportViolation", "parse_arena", "serialize_arena", "load_arena",
    "parse_automaton", "serialize_automaton", "load_automaton", "load_document", "resolve_state",
    "arena_document", "automaton_document", "bundle_from_document",
]
