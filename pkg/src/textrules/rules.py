"""Horn-rule data model and the human-editable rule file format.

Grammar (one rule per action head, rules may span lines)::

    file    := (comment | rule)*
    comment := '#' text-to-end-of-line
    rule    := head ['@b=' REAL] [':-' body] '.'
    head    := NAME ['(' VAR (',' VAR)* ')']
    body    := 'true' | literal (AND literal)*
    literal := [NOT] NAME '(' VAR (',' VAR)* ')' ['@w=' REAL]
    AND     := '&' | '∧'        NOT := 'not' | '¬'

NAME may contain hyphens (``be-located-at``). Every body variable must occur
in the head. Serialization always starts with a fixed header comment, which
parsing drops again. Output is canonical ASCII: ``not``, `` & ``, weights
written with ``repr``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator


class RuleSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class RuleValidationError(ValueError):
    pass


@dataclass(frozen=True)
class Literal:
    predicate: str
    variables: tuple[str, ...]
    negated: bool = False
    weight: float | None = None

    def __str__(self):
        s = f"{'not ' if self.negated else ''}{self.predicate}({','.join(self.variables)})"
        if self.weight is not None:
            s += f"@w={self.weight!r}"
        return s


@dataclass(frozen=True)
class HornRule:
    predicate: str
    variables: tuple[str, ...]
    body: tuple[Literal, ...] = ()
    source: str = field(default="learned", compare=False)  # learned | human
    bias: float | None = None

    @property
    def key(self) -> tuple[str, int]:
        return (self.predicate, len(self.variables))

    def validate(self) -> None:
        if len(set(self.variables)) != len(self.variables):
            raise RuleValidationError(f"{self.head_text()}: repeated head variable")
        for lit in self.body:
            for v in lit.variables:
                if v not in self.variables:
                    raise RuleValidationError(f"{self.head_text()}: unsafe variable {v!r} in {lit.predicate}")
            if lit.weight is not None and lit.weight < 0:
                raise RuleValidationError(f"{self.head_text()}: negative weight on {lit.predicate}")

    def head_text(self) -> str:
        if not self.variables:
            return self.predicate
        return f"{self.predicate}({','.join(self.variables)})"

    def __str__(self):
        head = self.head_text()
        if self.bias is not None:
            head += f"@b={self.bias!r}"
        if not self.body:
            return head + "."
        return f"{head} :- {' & '.join(str(l) for l in self.body)}."


@dataclass
class RuleFile:
    """Ordered rules and full-line comments."""

    items: list = field(default_factory=list)  # HornRule | str (comment text without '#')

    @property
    def rules(self) -> list[HornRule]:
        return [i for i in self.items if isinstance(i, HornRule)]

    def get(self, predicate: str, arity: int) -> HornRule | None:
        for r in self.rules:
            if r.key == (predicate, arity):
                return r
        return None

    def by_key(self) -> dict:
        return {r.key: r for r in self.rules}

    def validate(self) -> None:
        seen = set()
        for r in self.rules:
            r.validate()
            if r.key in seen:
                raise RuleValidationError(f"duplicate rule head {r.predicate}/{len(r.variables)}")
            seen.add(r.key)

    @classmethod
    def of(cls, rules, comments=()) -> "RuleFile":
        rf = cls([*comments, *rules])
        rf.validate()
        return rf


# -- tokenizer ------------------------------------------------------------------

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>#[^\n]*)"
    r"|(?P<implies>:-)|(?P<ann>@[wb]=[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)"
    r"|(?P<and>&|∧)|(?P<not>¬)|(?P<lp>\()|(?P<rp>\))|(?P<comma>,)|(?P<dot>\.)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_\-]*)"
)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int
    line_start: bool = False


def _tokenize(text: str) -> Iterator[_Tok]:
    pos, line, col = 0, 1, 1
    at_line_start = True
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise RuleSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        tok = m.group()
        if kind == "nl":
            line, col, at_line_start = line + 1, 1, True
        else:
            if kind == "name" and tok == "not":
                kind = "not"
            if kind != "ws":
                yield _Tok(kind, tok, line, col, at_line_start)
                at_line_start = False
            col += len(tok)
        pos = m.end()
    yield _Tok("eof", "", line, col)


class _Parser:
    def __init__(self, text: str):
        self.toks = list(_tokenize(text))
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self, kind: str, what: str | None = None) -> _Tok:
        t = self.peek()
        if t.kind != kind:
            raise RuleSyntaxError(f"expected {what or kind}, found {t.text or 'end of input'!r}", t.line, t.col)
        self.i += 1
        return t

    def parse(self) -> RuleFile:
        items = []
        while self.peek().kind != "eof":
            t = self.peek()
            if t.kind == "comment":
                self.i += 1
                text = t.text[1:].strip()
                if t.line_start and not (text == HEADER and not items):
                    items.append(text)
                continue
            items.append(self.rule())
        return RuleFile(items)

    def args(self) -> tuple[str, ...]:
        self.take("lp", "'('")
        names = [self.take("name", "variable").text]
        while self.peek().kind == "comma":
            self.i += 1
            names.append(self.take("name", "variable").text)
        self.take("rp", "')'")
        return tuple(names)

    def skip_comments(self):
        while self.peek().kind == "comment":
            self.i += 1

    def rule(self) -> HornRule:
        start = self.peek()
        name = self.take("name", "rule head").text
        variables = self.args() if self.peek().kind == "lp" else ()
        bias = None
        if self.peek().kind == "ann":
            t = self.take("ann")
            if not t.text.startswith("@b="):
                raise RuleSyntaxError("only a bias annotation @b= may follow the head", t.line, t.col)
            bias = float(t.text[3:])
        body = []
        self.skip_comments()
        if self.peek().kind == "implies":
            self.i += 1
            self.skip_comments()
            if self.peek().kind == "name" and self.peek().text == "true":
                self.i += 1
            else:
                body.append(self.literal())
                self.skip_comments()
                while self.peek().kind == "and":
                    self.i += 1
                    self.skip_comments()
                    body.append(self.literal())
                    self.skip_comments()
        self.take("dot", "'.'")
        rule = HornRule(name, variables, tuple(body), bias=bias)
        try:
            rule.validate()
        except RuleValidationError as e:
            raise RuleValidationError(f"line {start.line}: {e}") from None
        return rule

    def literal(self) -> Literal:
        negated = False
        if self.peek().kind == "not":
            self.i += 1
            negated = True
        name = self.take("name", "predicate").text
        variables = self.args()
        weight = None
        if self.peek().kind == "ann":
            t = self.take("ann")
            if not t.text.startswith("@w="):
                raise RuleSyntaxError("only a weight annotation @w= may follow a literal", t.line, t.col)
            weight = float(t.text[3:])
        return Literal(name, variables, negated, weight)


def parse_rules(text: str, source: str = "learned") -> RuleFile:
    rf = _Parser(text).parse()
    if source != "learned":
        rf.items = [HornRule(i.predicate, i.variables, i.body, source, i.bias) if isinstance(i, HornRule) else i
                    for i in rf.items]
    rf.validate()
    return rf


HEADER = "action rules: head(vars) :- literal & not literal ... ."


def serialize_rules(rf: RuleFile) -> str:
    rf.validate()
    lines = [f"# {HEADER}"]
    for item in rf.items:
        if item == HEADER:
            continue
        lines.append(f"# {item}" if isinstance(item, str) else str(item))
    return "\n".join(lines) + "\n"


def apply_edit(learned: RuleFile, edits: RuleFile) -> RuleFile:
    """Edited rules replace learned rules with the same head; new heads are appended."""
    edit_map = edits.by_key()
    used = set()
    items = []
    for item in learned.items:
        if isinstance(item, HornRule) and item.key in edit_map:
            items.append(edit_map[item.key])
            used.add(item.key)
        else:
            items.append(item)
    for r in edits.rules:
        if r.key not in used:
            items.append(r)
    merged = RuleFile(items)
    merged.validate()
    return merged
