from importlib import resources

import pytest
from hypothesis import given, strategies as st

from textrules.rules import (
    HornRule, Literal, RuleFile, RuleSyntaxError, RuleValidationError, apply_edit, parse_rules,
    serialize_rules,
)


def _data(name):
    return resources.files("textrules").joinpath("data", name).read_text()


def test_parse_weighted_and_negated_literals():
    rf = parse_rules("take(x,y)@b=1.0 :- be-located-at(y)@w=0.9 & not carry(x).\n")
    (r,) = rf.rules
    assert r.key == ("take", 2) and r.bias == 1.0
    assert r.body == (Literal("be-located-at", ("y",), False, 0.9), Literal("carry", ("x",), True))


def test_zero_arity_and_empty_body():
    (r,) = parse_rules("look.\n").rules
    assert r.variables == () and r.body == ()
    assert str(r) == "look."


def test_syntax_error_position():
    with pytest.raises(RuleSyntaxError) as e:
        parse_rules("go(x) :- direction(x).\ntake(x,y :- a(x).\n")
    assert (e.value.line, e.value.column) == (2, 10)


def test_unsafe_variable():
    with pytest.raises(RuleValidationError, match="unsafe"):
        parse_rules("take(x) :- atlocation(x,y).\n")


def test_duplicate_head():
    with pytest.raises(RuleValidationError, match="duplicate"):
        parse_rules("go(x) :- direction(x).\ngo(y).\n")


@pytest.mark.parametrize("name", ["hard_learned.rules", "hard_corrected.rules", "take_correction.rules"])
def test_shipped_files_round_trip(name):
    text = _data(name)
    assert serialize_rules(parse_rules(text)) == text


def test_shipped_learned_rules():
    rf = parse_rules(_data("hard_learned.rules"))
    assert str(rf.get("take", 2)) == "take(x,y) :- be-located-at(y)."
    assert str(rf.get("put", 2)) == "put(x,y) :- carry(x) & atlocation(x,y)."
    assert len(rf.rules) == 5


def test_apply_edit_replaces_the_take_rule():
    learned = parse_rules(_data("hard_learned.rules"))
    edit = parse_rules(_data("take_correction.rules"), source="human")
    merged = apply_edit(learned, edit)
    assert str(merged.get("take", 2)) == "take(x,y) :- not atlocation(x,y)."
    assert merged.get("take", 2).source == "human"
    assert merged.rules == parse_rules(_data("hard_corrected.rules")).rules
    extra = apply_edit(learned, parse_rules("open(x).\n"))
    assert extra.rules[-1].key == ("open", 1)


_preds = st.sampled_from(["carry", "atlocation", "be-located-at", "direction", "open"])
_weights = st.none() | st.floats(0, 5, allow_nan=False).map(lambda w: round(w, 4))


@st.composite
def rules(draw):
    verb = draw(st.sampled_from(["go", "take", "put", "insert", "examine"]))
    arity = draw(st.integers(0, 2))
    vs = ("x", "y")[:arity]
    body = []
    if arity:
        for _ in range(draw(st.integers(0, 3))):
            lit_vs = tuple(draw(st.sampled_from(vs)) for _ in range(draw(st.integers(1, 2))))
            body.append(Literal(draw(_preds), lit_vs, draw(st.booleans()), draw(_weights)))
    return HornRule(verb, vs, tuple(body), bias=draw(_weights))


@given(st.lists(rules(), max_size=5, unique_by=lambda r: r.key))
def test_serialize_parse_round_trip(rs):
    rf = RuleFile.of(rs, ["a comment"])
    text = serialize_rules(rf)
    again = parse_rules(text)
    assert again.rules == rf.rules
    assert serialize_rules(again) == text


def test_spec_style_examples():
    (r,) = parse_rules("take(x,y) :- not atlocation(x,y).").rules
    assert r.body == (Literal("atlocation", ("x", "y"), True),)
    (r,) = parse_rules("go(x) :- direction(x).").rules
    assert r.body == (Literal("direction", ("x",)),)
    with pytest.raises(RuleValidationError, match="'z'"):
        parse_rules("put(x,y) :- carry(z).")


def test_empty_file_serializes_to_the_header():
    text = serialize_rules(RuleFile())
    assert text.startswith("#") and text.count("\n") == 1
    assert parse_rules(text).rules == []


def test_empty_edit_keeps_learned_rules():
    learned = parse_rules(_data("hard_learned.rules"))
    assert apply_edit(learned, RuleFile()).rules == learned.rules


def test_unicode_connectives():
    (r,) = parse_rules("take(x,y) :- ¬atlocation(x,y) ∧ carry(x).").rules
    assert str(r) == "take(x,y) :- not atlocation(x,y) & carry(x)."
