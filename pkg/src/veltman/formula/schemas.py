"""Axiom schemata of IL and its extensions, with side conditions on their slots."""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from .classes import es2_level, in_bs1
from .parser import parse_formula, render_formula
from .syntax import And, Box, Formula, Or, Var, flatten, substitute, variables


class SchemaError(ValueError):
    pass


def is_box_cnf(f: Formula) -> bool:
    """A conjunction of disjunctions of boxed formulas."""
    return all(
        isinstance(lit, Box) for clause in flatten(f, And) for lit in flatten(clause, Or)
    )


# slot name -> (description, test)
Condition = tuple[str, Callable[[Formula], bool]]

_ES2 = ("ES2", lambda f: es2_level(f) is not None)
_BS1 = ("BS1", in_bs1)


def _stage(i: int) -> Condition:
    return (f"ES2^{i}", lambda f: (lvl := es2_level(f)) is not None and lvl <= i)


_TEMPLATES = {
    "L1": "[](A -> B) -> []A -> []B",
    "L2": "[]A -> [][]A",
    "L3": "[]([]A -> A) -> []A",
    "J1": "[](A -> B) -> A |> B",
    "J2": "(A |> B) & (B |> C) -> A |> C",
    "J3": "(A |> C) & (B |> C) -> A | B |> C",
    "J4": "A |> B -> <>A -> <>B",
    "J5": "<>A |> A",
    "W": "A |> B -> A |> B & []~A",
    "Wstar": "A |> B -> B & []C |> B & []C & []~A",
    "M0": "A |> B -> <>A & []C |> B & []C",
    "M": "A |> B -> A & []C |> B & []C",
    "P": "A |> B -> [](A |> B)",
    "R": "A |> B -> ~(A |> ~C) |> B & []C",
    "Rstar": "A |> B -> ~(A |> ~C) |> B & []C & []~A",
    "B": "A |> B -> A & []C |> B & []C",
    "Bprime": "A |> B -> A & C |> B & C",
    "Z": "(A == B) -> A |> A & B",
    "Zext": "[]((A <-> A2) & (B <-> B2)) -> (A == B) -> A |> A & B",
}

IL_AXIOMS = ("L1", "L2", "L3", "J1", "J2", "J3", "J4", "J5")


@dataclass(frozen=True)
class Schema:
    """A schema template over metavariable slots, plus per-slot class requirements."""

    id: str
    template: Formula
    slots: tuple[str, ...]
    conditions: tuple[tuple[str, Condition], ...] = ()

    @property
    def name(self) -> str:
        return self.id

    def check(self, assignment: dict[str, Formula]) -> None:
        missing = [s for s in self.slots if s not in assignment]
        if missing:
            raise SchemaError(f"{self.id}: no formula for slot(s) {', '.join(missing)}")
        for slot, (cls, test) in self.conditions:
            if not test(assignment[slot]):
                raise SchemaError(
                    f"{self.id}: slot {slot} requires {cls}, got {render_formula(assignment[slot])}"
                )

    def instantiate(self, assignment: dict[str, Formula]) -> Formula:
        self.check(assignment)
        return substitute(self.template, {s: assignment[s] for s in self.slots})


_STAGED = re.compile(r"B(\d+)$")


@lru_cache(maxsize=None)
def get_schema(schema_id: str) -> Schema:
    """Look up a schema by id: ``L1`` ... ``J5``, ``W``, ``Wstar``, ``M0``, ``M``,
    ``P``, ``R``, ``Rstar``, ``B``, ``B<i>``, ``Bprime``, ``Z``, ``Zext``."""
    m = _STAGED.match(schema_id)
    if m:
        template = parse_formula(_TEMPLATES["B"])
        conditions = (("A", _stage(int(m.group(1)))),)
    elif schema_id in _TEMPLATES:
        template = parse_formula(_TEMPLATES[schema_id])
        conditions = {
            "B": (("A", _ES2),),
            "Bprime": (("A", _ES2), ("C", ("a CNF of boxed formulas", is_box_cnf))),
            "Z": (("A", _BS1), ("B", _BS1)),
            "Zext": (("A", _ES2), ("A2", _ES2), ("B", _ES2), ("B2", _ES2)),
        }.get(schema_id, ())
    else:
        raise SchemaError(f"unknown schema {schema_id!r}")
    return Schema(schema_id, template, tuple(sorted(variables(template))), conditions)


def stage_of(schema_id: str) -> int | None:
    m = _STAGED.match(schema_id)
    return int(m.group(1)) if m else None


def instantiate(schema: Schema | str, assignment: dict[str, Formula | str]) -> Formula:
    """Instantiate a schema; string values are parsed first.

    >>> render_formula(instantiate("J5", {"A": "p"}))
    '<>p |> p'
    """
    if isinstance(schema, str):
        schema = get_schema(schema)
    parsed = {k: parse_formula(v) if isinstance(v, str) else v for k, v in assignment.items()}
    return schema.instantiate(parsed)


def match(template: Formula, f: Formula, binding: dict | None = None) -> dict | None:
    """First-order matching: every variable of ``template`` is a metavariable."""
    binding = {} if binding is None else binding
    stack = [(template, f)]
    while stack:
        t, g = stack.pop()
        if isinstance(t, Var):
            bound = binding.get(t.name)
            if bound is None:
                binding[t.name] = g
            elif bound != g:
                return None
            continue
        if type(t) is not type(g):
            return None
        if hasattr(t, "arg"):
            stack.append((t.arg, g.arg))
        elif hasattr(t, "left"):
            stack.append((t.left, g.left))
            stack.append((t.right, g.right))
    return binding


def match_schema(schema: Schema | str, f: Formula) -> dict[str, Formula]:
    """Recover the slot assignment of an instance; raise if ``f`` is not one."""
    if isinstance(schema, str):
        schema = get_schema(schema)
    binding = match(schema.template, f)
    if binding is None:
        raise SchemaError(f"{render_formula(f)} is not an instance of {schema.id}")
    schema.check(binding)
    return binding
