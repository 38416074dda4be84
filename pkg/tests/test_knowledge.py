import pytest

from textrules.core import fact
from textrules.knowledge import (
    CommonsenseGraph, MissingKnowledgeError, TripleFormatError, load_triples, subgraph_for,
)
from textrules.world import GameSpec


def test_shoe_maps_to_shoe_cabinet(shoe_spec):
    assert fact("atlocation", "golf shoe", "shoe cabinet") in subgraph_for(shoe_spec)


def test_no_objects_no_facts(shoe_spec):
    spec = GameSpec("easy", shoe_spec.rooms, [e for e in shoe_spec.entities if e.kind != "object"], {})
    assert subgraph_for(spec) == set()


def test_two_objects_without_distractors(shoe_spec):
    facts = subgraph_for(shoe_spec, distractors=False)
    assert len(facts) == len(shoe_spec.goal_map) == 2


def test_missing_triple_is_an_error(shoe_spec):
    with pytest.raises(MissingKnowledgeError, match="golf shoe"):
        subgraph_for(shoe_spec, CommonsenseGraph(frozenset()))


def test_load_triples(tmp_path):
    p = tmp_path / "kb.tsv"
    p.write_text("sock\tatlocation\tdresser\nhat\tatlocation\tcoat rack\nmug\tatlocation\tshelf\n")
    assert len(load_triples(p).triples) == 3
    p.write_text("sock\tatlocation\tdresser\nsock\tatlocation\tdresser\n")
    assert len(load_triples(p).triples) == 1
    p.write_text("sock\tatlocation\tdresser\nhat\tcoat rack\n")
    with pytest.raises(TripleFormatError, match=":2:"):
        load_triples(p)


def test_graph_text_round_trip(tmp_path):
    g = CommonsenseGraph.from_vocabulary()
    p = tmp_path / "kb.tsv"
    p.write_text(g.to_text())
    assert load_triples(p) == g
