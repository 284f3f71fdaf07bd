"""ASCII concrete syntax: tokenizer, precedence-climbing parser and printer.

Binding, tightest first::

    ~  []  <>          prefix
    &                  left associative
    |                  left associative
    |>  ==             non-associative
    ->                 right associative
    <->                non-associative

``<>A``, ``true``, ``A == B`` and ``A <-> B`` are expanded while parsing.
"""
from __future__ import annotations

import re

from .syntax import (
    BOT, TOP, And, Bot, Box, Formula, Imp, Not, Or, Rhd, Var, diamond, equiv, iff,
)


class ParseError(ValueError):
    def __init__(self, message: str, pos: int | None = None):
        self.pos = pos
        if pos is not None:
            message = f"{message} (at position {pos})"
        super().__init__(message)


_TOKEN = re.compile(
    r"\s*(?:(?P<ident>#?[A-Za-z_][A-Za-z0-9_]*|#[0-9][A-Za-z0-9_]*)"
    r"|(?P<op><->|->|\|>|==|\[\]|<>|[~&|()]))"
)

RESERVED_WORDS = {"false", "true"}


def tokenize(text: str) -> list[tuple[str, str, int]]:
    """Return ``(kind, value, pos)`` triples ending with an ``end`` token."""
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        start = m.start("ident") if m.group("ident") else m.start("op")
        if m.group("ident"):
            tokens.append(("ident", m.group("ident"), start))
        else:
            tokens.append(("op", m.group("op"), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


# binary operators: (level, associativity)
_BINARY = {
    "<->": (1, "none"),
    "->": (2, "right"),
    "|>": (3, "none"),
    "==": (3, "none"),
    "|": (4, "left"),
    "&": (5, "left"),
}


def _build(op: str, left: Formula, right: Formula) -> Formula:
    if op == "&":
        return And(left, right)
    if op == "|":
        return Or(left, right)
    if op == "->":
        return Imp(left, right)
    if op == "|>":
        return Rhd(left, right)
    if op == "==":
        return equiv(left, right)
    return iff(left, right)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def parse(self) -> Formula:
        f = self.binary(1)
        kind, value, pos = self.peek()
        if kind != "end":
            if value == ")":
                raise ParseError("unbalanced parentheses: unexpected ')'", pos)
            raise ParseError(f"unexpected token {value!r}", pos)
        return f

    def binary(self, min_level: int) -> Formula:
        left = self.unary()
        while True:
            kind, value, pos = self.peek()
            if kind != "op" or value not in _BINARY:
                return left
            level, assoc = _BINARY[value]
            if level < min_level:
                return left
            self.advance()
            if assoc == "left":
                right = self.binary(level + 1)
            elif assoc == "right":
                right = self.binary(level)
            else:
                right = self.binary(level + 1)
            left = _build(value, left, right)
            if assoc == "none":
                kind2, value2, pos2 = self.peek()
                if kind2 == "op" and value2 in _BINARY and _BINARY[value2][0] == level:
                    raise ParseError(
                        f"{value!r} and {value2!r} do not associate; add parentheses", pos2
                    )
                continue

    def unary(self) -> Formula:
        kind, value, pos = self.advance()
        if kind == "op":
            if value == "~":
                return Not(self.unary())
            if value == "[]":
                return Box(self.unary())
            if value == "<>":
                return diamond(self.unary())
            if value == "(":
                f = self.binary(1)
                k2, v2, p2 = self.advance()
                if v2 != ")":
                    raise ParseError("unbalanced parentheses: expected ')'", p2)
                return f
            if value == ")":
                raise ParseError("unbalanced parentheses: unexpected ')'", pos)
            raise ParseError(f"expected a formula, found {value!r}", pos)
        if kind == "ident":
            if value == "false":
                return BOT
            if value == "true":
                return TOP
            return Var(value)
        raise ParseError("unexpected end of input", pos)


def parse_formula(text: str) -> Formula:
    """Parse ``text`` into an expanded formula tree.

    >>> render_formula(parse_formula("[]p -> p |> q"))
    '[]p -> p |> q'
    """
    return _Parser(text).parse()


# printing levels: binary levels as above, prefix 6, atoms 7
def _level(f: Formula) -> int:
    if isinstance(f, Imp):
        return 2
    if isinstance(f, Rhd):
        return 3
    if isinstance(f, Or):
        return 4
    if isinstance(f, And):
        return 5
    if isinstance(f, (Not, Box)):
        return 6
    return 7


def _wrap(f: Formula, parens: bool) -> str:
    s = render_formula(f)
    return f"({s})" if parens else s


def render_formula(f: Formula) -> str:
    """Deterministic printer; ``parse_formula`` inverts it exactly."""
    if isinstance(f, Var):
        return f.name
    if isinstance(f, Bot):
        return "false"
    if isinstance(f, Not):
        if isinstance(f.arg, Bot):
            return "true"
        if isinstance(f.arg, Box) and isinstance(f.arg.arg, Not):
            inner = f.arg.arg.arg
            return "<>" + _wrap(inner, _level(inner) < 6)
        return "~" + _wrap(f.arg, _level(f.arg) < 6)
    if isinstance(f, Box):
        return "[]" + _wrap(f.arg, _level(f.arg) < 6)
    if isinstance(f, And):
        return f"{_wrap(f.left, _level(f.left) < 5)} & {_wrap(f.right, _level(f.right) <= 5)}"
    if isinstance(f, Or):
        return f"{_wrap(f.left, _level(f.left) < 4)} | {_wrap(f.right, _level(f.right) <= 4)}"
    if isinstance(f, Rhd):
        return f"{_wrap(f.left, _level(f.left) <= 3)} |> {_wrap(f.right, _level(f.right) <= 3)}"
    if isinstance(f, Imp):
        return f"{_wrap(f.left, _level(f.left) <= 2)} -> {_wrap(f.right, _level(f.right) < 2)}"
    raise TypeError(f"not a formula: {f!r}")
