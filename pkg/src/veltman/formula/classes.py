"""Syntactic formula classes BS1, ES2 (with its stages), ES3, ES4 and EP2c.

Membership is decided on the expanded tree by the literal grammars, with
one extension: the constants ``false`` and ``true`` count as base members
of every class.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .syntax import And, Bot, Box, Formula, Not, Or, Rhd


@dataclass(frozen=True)
class ClassReport:
    in_bs1: bool
    es2_level: int | None
    in_es3: bool
    in_es4: bool
    in_ep2c: bool

    @property
    def in_es2(self) -> bool:
        return self.es2_level is not None

    def lines(self) -> list[str]:
        def mark(b):
            return "yes" if b else "no"

        level = "none" if self.es2_level is None else str(self.es2_level)
        return [
            f"BS1 {mark(self.in_bs1)}",
            f"ES2 level {level}",
            f"ES3 {mark(self.in_es3)}",
            f"ES4 {mark(self.in_es4)}",
            f"EP2c {mark(self.in_ep2c)}",
        ]


def _is_constant(f: Formula) -> bool:
    return isinstance(f, Bot) or (isinstance(f, Not) and isinstance(f.arg, Bot))


@lru_cache(maxsize=65536)
def in_bs1(f: Formula) -> bool:
    """Boolean combinations (not, and, or) of boxed formulas."""
    if isinstance(f, (Box, Bot)):
        return True
    if isinstance(f, Not):
        return in_bs1(f.arg)
    if isinstance(f, (And, Or)):
        return in_bs1(f.left) and in_bs1(f.right)
    return False


@lru_cache(maxsize=65536)
def es2_level(f: Formula) -> int | None:
    """Least ``i`` with ``f`` in stage ``ES2^i``, or ``None`` outside ES2."""
    if in_bs1(f):
        return 0
    if isinstance(f, (And, Or)):
        left, right = es2_level(f.left), es2_level(f.right)
        if left is None or right is None:
            return None
        return max(left, right)
    if isinstance(f, Not) and isinstance(f.arg, Rhd):
        inner = es2_level(f.arg.left)
        return None if inner is None else inner + 1
    return None


@lru_cache(maxsize=65536)
def in_es3(f: Formula) -> bool:
    if isinstance(f, (Box, Rhd)) or _is_constant(f):
        return True
    if isinstance(f, Not):
        return isinstance(f.arg, Box)
    if isinstance(f, (And, Or)):
        return in_es3(f.left) and in_es3(f.right)
    return False


@lru_cache(maxsize=65536)
def in_es4(f: Formula) -> bool:
    if isinstance(f, (Box, Rhd, Bot)):
        return True
    if isinstance(f, Not):
        return in_es4(f.arg)
    if isinstance(f, (And, Or)):
        return in_es4(f.left) and in_es4(f.right)
    return False


def in_ep2c(f: Formula) -> bool:
    # the EP2c grammar is the ES3 grammar verbatim
    return in_es3(f)


def in_es2_stage(f: Formula, i: int) -> bool:
    level = es2_level(f)
    return level is not None and level <= i


def classify(f: Formula) -> ClassReport:
    return ClassReport(
        in_bs1=in_bs1(f),
        es2_level=es2_level(f),
        in_es3=in_es3(f),
        in_es4=in_es4(f),
        in_ep2c=in_ep2c(f),
    )
