"""Commonsense ``atlocation`` knowledge and per-game subgraphs."""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .core import SymbolicFact, fact
from .vocabulary import EntityVocabulary, default_vocabulary, root_of
from .world import GameSpec

RELATION = "atlocation"


class TripleFormatError(ValueError):
    pass


class MissingKnowledgeError(LookupError):
    pass


@dataclass(frozen=True)
class CommonsenseGraph:
    triples: frozenset  # of (object, "atlocation", holder)

    @classmethod
    def from_vocabulary(cls, vocab: EntityVocabulary | None = None) -> "CommonsenseGraph":
        vocab = vocab or default_vocabulary()
        return cls(frozenset((o, RELATION, h) for o, h in vocab.pairs))

    def holders_of(self, obj: str) -> list[str]:
        """Holders recorded for any object phrase sharing ``obj``'s root noun."""
        r = root_of(obj)
        return sorted(h for o, _, h in self.triples if root_of(o) == r)

    def to_text(self) -> str:
        return "".join(f"{o}\t{rel}\t{h}\n" for o, rel, h in sorted(self.triples))


def load_triples(path) -> CommonsenseGraph:
    """Read ``object<TAB>atlocation<TAB>holder`` lines; blank lines and ``#`` comments are skipped."""
    triples = set()
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3 or not all(p.strip() for p in parts):
            raise TripleFormatError(f"{path}:{lineno}: expected 3 tab-separated fields, got {len(parts)}")
        o, rel, h = (p.strip() for p in parts)
        if rel != RELATION:
            raise TripleFormatError(f"{path}:{lineno}: unsupported relation {rel!r}")
        triples.add((o, rel, h))
    return CommonsenseGraph(frozenset(triples))


_DEFAULT_GRAPH: CommonsenseGraph | None = None


def default_graph() -> CommonsenseGraph:
    global _DEFAULT_GRAPH
    if _DEFAULT_GRAPH is None:
        _DEFAULT_GRAPH = CommonsenseGraph.from_vocabulary()
    return _DEFAULT_GRAPH


def subgraph_for(
    spec: GameSpec,
    graph: CommonsenseGraph | None = None,
    distractors: bool | None = None,
) -> set[SymbolicFact]:
    """``atlocation`` facts relating the game's objects to holders present in it.

    Goal objects are always covered. With ``distractors`` (default: on for
    medium and hard) the facts for the game's other objects are included too.
    """
    graph = graph or default_graph()
    if distractors is None:
        distractors = spec.difficulty != "easy"
    holder_roots = {root_of(h) for h in spec.holders}
    out = set()
    for obj in spec.objects:
        is_goal = obj in spec.goal_map
        if not is_goal and not distractors:
            continue
        r = root_of(obj)
        found = [
            (o, h) for o, _, h in sorted(graph.triples)
            if root_of(o) == r and root_of(h) in holder_roots
        ]
        if is_goal:
            goal_root = root_of(spec.goal_map[obj])
            if not any(root_of(h) == goal_root for _, h in found):
                raise MissingKnowledgeError(f"no atlocation triple for goal object {obj!r}")
        out |= {fact(RELATION, o, h) for o, h in found}
    return out
