"""Formula trees for the modal language with box and the binary interpretability modality.

Eight node types. Diamond, top, biconditional and the interpretability
equivalence ``==`` are abbreviations and are expanded by the helper
constructors below; they never appear as nodes.
"""
from __future__ import annotations

from dataclasses import dataclass, fields
from typing import Iterable, Iterator, Union


def _cached_hash(self):
    try:
        return self.__dict__["_hash"]
    except KeyError:
        h = hash((type(self).__name__,) + tuple(getattr(self, f.name) for f in fields(self)))
        object.__setattr__(self, "_hash", h)
        return h


def _node(cls):
    cls = dataclass(frozen=True)(cls)
    # trees get hashed a lot (dict keys in normal forms and proofs); cache it
    cls.__hash__ = _cached_hash
    return cls


@_node
class Var:
    name: str


@_node
class Bot:
    pass


@_node
class Not:
    arg: "Formula"


@_node
class And:
    left: "Formula"
    right: "Formula"


@_node
class Or:
    left: "Formula"
    right: "Formula"


@_node
class Imp:
    left: "Formula"
    right: "Formula"


@_node
class Box:
    arg: "Formula"


@_node
class Rhd:
    left: "Formula"
    right: "Formula"


Formula = Union[Var, Bot, Not, And, Or, Imp, Box, Rhd]

BOT = Bot()
TOP = Not(BOT)

BINARY = (And, Or, Imp, Rhd)
UNARY = (Not, Box)


def diamond(a: Formula) -> Formula:
    return Not(Box(Not(a)))


def iff(a: Formula, b: Formula) -> Formula:
    return And(Imp(a, b), Imp(b, a))


def equiv(a: Formula, b: Formula) -> Formula:
    """Mutual interpretability, ``(a |> b) & (b |> a)``."""
    return And(Rhd(a, b), Rhd(b, a))


def conj(items: Iterable[Formula]) -> Formula:
    """Left-nested conjunction; the empty conjunction is ``true``."""
    out = None
    for f in items:
        out = f if out is None else And(out, f)
    return TOP if out is None else out


def disj(items: Iterable[Formula]) -> Formula:
    """Left-nested disjunction; the empty disjunction is ``false``."""
    out = None
    for f in items:
        out = f if out is None else Or(out, f)
    return BOT if out is None else out


def flatten(f: Formula, kind: type) -> list[Formula]:
    """Operands of a (left- or right-nested) chain of ``kind`` nodes."""
    if isinstance(f, kind):
        return flatten(f.left, kind) + flatten(f.right, kind)
    return [f]


def children(f: Formula) -> tuple:
    if isinstance(f, BINARY):
        return (f.left, f.right)
    if isinstance(f, UNARY):
        return (f.arg,)
    return ()


def subformulas(f: Formula) -> Iterator[Formula]:
    """Pre-order traversal, left to right."""
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(reversed(children(g)))


def variables(f: Formula) -> list[str]:
    """Variable names in order of first occurrence."""
    seen = {}
    for g in subformulas(f):
        if isinstance(g, Var):
            seen.setdefault(g.name, None)
    return list(seen)


def substitute(f: Formula, mapping: dict) -> Formula:
    """Replace variables by formulas, simultaneously."""
    if isinstance(f, Var):
        return mapping.get(f.name, f)
    if isinstance(f, Bot):
        return f
    if isinstance(f, UNARY):
        return type(f)(substitute(f.arg, mapping))
    return type(f)(substitute(f.left, mapping), substitute(f.right, mapping))


def size(f: Formula) -> int:
    return sum(1 for _ in subformulas(f))


def is_reserved(name: str) -> bool:
    """Names starting with ``#`` belong to generated valuations."""
    return name.startswith("#")
