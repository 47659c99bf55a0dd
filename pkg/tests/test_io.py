import json
from fractions import Fraction

import pytest

from gamesynth import ArenaError, SupportViolation
from gamesynth.io import (
    DocumentError,
    load_document,
    parse_arena,
    parse_automaton,
    serialize_arena,
    serialize_automaton,
)
from gamesynth.words import WeightedAutomaton

from conftest import fixture_file


def doc(**over):
    base = {
        "states": [{"id": 1, "owner": "Eve"}, {"id": 2, "owner": "Adam"}],
        "edges": [{"src": 1, "dst": 2, "weight": 1}, {"src": 2, "dst": 1, "weight": "-1/2"}, {"src": 2, "dst": 2}],
        "initial": 1,
    }
    base.update(over)
    return json.dumps(base, indent=2)


class TestRoundTrip:
    @pytest.mark.parametrize("name", ["arena_mp.json", "arena_adm.json"])
    def test_arena_fixture(self, name):
        text = open(fixture_file(name)).read()
        first = parse_arena(text)
        again = parse_arena(serialize_arena(first))
        assert again.arena == first.arena
        assert again.rnd == first.rnd
        assert again.objectives == first.objectives
        assert serialize_arena(again) == serialize_arena(first)

    def test_automaton_fixture(self, aut_word):
        again = parse_automaton(serialize_automaton(aut_word))
        assert again == aut_word
        assert serialize_automaton(again) == serialize_automaton(aut_word)

    def test_load_document_dispatch(self):
        assert isinstance(load_document(fixture_file("aut_word.json")), WeightedAutomaton)
        assert load_document(fixture_file("arena_mp.json")).rnd is not None


class TestExactNumbers:
    def test_fraction_strings(self, rnd_mp):
        assert rnd_mp.dist[3] == {1: Fraction(9, 10), 2: Fraction(1, 10)}

    def test_decimal_literals_never_pass_through_float(self):
        text = doc(edges=[{"src": 1, "dst": 2, "weight": 0.1}, {"src": 2, "dst": 1, "weight": 0.2},
                          {"src": 2, "dst": 2}])
        arena = parse_arena(text).arena
        assert arena.weight(1, 2) + arena.weight(2, 1) == Fraction(3, 10)

    def test_serialized_weights_are_strings(self, mp_bundle):
        out = json.loads(serialize_arena(mp_bundle))
        assert all(isinstance(e["weight"], str) for e in out["edges"])
        assert out["adversary"]["3"] == {"1": "9/10", "2": "1/10"}


class TestErrors:
    def test_syntax_error_location(self):
        text = '{\n  "states": [\n    {"id": 1, "owner": "Eve"},,\n  ]\n}'
        with pytest.raises(DocumentError, match=r"line 3, column \d+"):
            parse_arena(text)

    def test_validation_errors_carry_locations(self):
        text = "\n".join([
            "{",
            '  "states": [',
            '    {"id": 1, "owner": "Eve"},',
            '    {"id": 2, "owner": "Adam"}',
            "  ],",
            '  "edges": [',
            '    {"src": 1, "dst": 2},',
            '    {"src": 1, "dst": 9}',
            "  ],",
            '  "initial": 1',
            "}",
        ])
        with pytest.raises(ArenaError) as err:
            parse_arena(text)
        by_code = {i.code: i for i in err.value.issues}
        assert by_code["UnknownState"].location == "line 8, column 5"
        # state 2 has no outgoing edge
        assert by_code["NonTotalEdgeRelation"].location == "line 4, column 5"

    def test_empty_states(self):
        with pytest.raises(ArenaError) as err:
            parse_arena(json.dumps({"states": [], "edges": [], "initial": 1}))
        assert "EmptyArena" in err.value.codes

    def test_bad_version(self):
        with pytest.raises(DocumentError):
            parse_arena(doc(format_version=2))

    def test_adversary_outside_support(self):
        with pytest.raises(SupportViolation):
            parse_arena(doc(adversary={"1": {"2": "1"}}))

    def test_unknown_objective_state(self):
        with pytest.raises(ArenaError):
            parse_arena(doc(objectives={"eve": [7], "adam": []}))

    def test_automaton_needs_kind(self):
        with pytest.raises(DocumentError):
            parse_automaton(doc())

    def test_automaton_totality(self):
        text = json.dumps({"kind": "automaton", "states": [1], "initial": 1, "alphabet": ["a", "b"],
                           "transitions": [{"src": 1, "letter": "a", "dst": 1}]})
        with pytest.raises(ValueError, match="no transition"):
            parse_automaton(text)
