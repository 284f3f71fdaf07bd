"""List-style Hilbert proof checker: tautologies, schema instances, hypotheses, MP and Nec."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from ..formula import Box, Formula, Imp, Bot, render_formula
from ..formula.normal import evaluate_bits, modal_atoms, row_masks
from ..formula.schemas import IL_AXIOMS, SchemaError, get_schema, match_schema

MAX_TAUT_ATOMS = 20


class ProofError(ValueError):
    """Malformed input or an exceeded resource budget."""


class AtomBudgetError(ProofError):
    pass


class ProofRejected(Exception):
    def __init__(self, step: int, reason: str):
        super().__init__(f"step {step}: {reason}")
        self.step = step
        self.reason = reason


def taut(f: Formula) -> bool:
    """Is ``f`` a propositional tautology when its modal atoms are read as letters?"""
    atoms = [a for a in modal_atoms(f) if not isinstance(a, Bot)]
    if len(atoms) > MAX_TAUT_ATOMS:
        raise AtomBudgetError(f"{len(atoms)} atoms exceed the truth-table budget of {MAX_TAUT_ATOMS}")
    cols, full = row_masks(len(atoms))
    return evaluate_bits(f, dict(zip(atoms, cols)), full) == full


@dataclass(frozen=True)
class Taut:
    formula: Formula


@dataclass(frozen=True)
class Ax:
    schema: str
    formula: Formula


@dataclass(frozen=True)
class Hyp:
    formula: Formula


@dataclass(frozen=True)
class MP:
    premise: int
    implication: int


@dataclass(frozen=True)
class Nec:
    premise: int


Step = Union[Taut, Ax, Hyp, MP, Nec]


@dataclass(frozen=True)
class Derivation:
    """Steps are numbered from 1; references point at strictly earlier steps."""

    steps: tuple[Step, ...]
    hypotheses: tuple[Formula, ...] = ()
    enabled: frozenset[str] = field(default_factory=frozenset)

    def __len__(self):
        return len(self.steps)


def _ref(k: int, i: int) -> None:
    if not 1 <= i < k:
        raise ProofRejected(k, f"reference to step {i} is not an earlier step")


def check_steps(d: Derivation) -> list[tuple[Formula, bool]]:
    """Formula and uses-hypothesis flag of every step; raises ``ProofRejected`` on the first bad one."""
    hyps = set(d.hypotheses)
    allowed = set(IL_AXIOMS) | set(d.enabled)
    out: list[tuple[Formula, bool]] = []
    for k, step in enumerate(d.steps, start=1):
        if isinstance(step, Taut):
            if not taut(step.formula):
                raise ProofRejected(k, f"{render_formula(step.formula)} is not a tautology")
            out.append((step.formula, False))
        elif isinstance(step, Ax):
            if step.schema not in allowed:
                raise ProofRejected(k, f"schema {step.schema} is not enabled")
            try:
                match_schema(get_schema(step.schema), step.formula)
            except SchemaError as exc:
                raise ProofRejected(k, str(exc)) from None
            out.append((step.formula, False))
        elif isinstance(step, Hyp):
            if step.formula not in hyps:
                raise ProofRejected(k, f"{render_formula(step.formula)} is not a hypothesis")
            out.append((step.formula, True))
        elif isinstance(step, MP):
            _ref(k, step.premise)
            _ref(k, step.implication)
            (a, ha), (imp, hi) = out[step.premise - 1], out[step.implication - 1]
            if not isinstance(imp, Imp) or imp.left != a:
                raise ProofRejected(
                    k, f"step {step.implication} is not an implication from step {step.premise}"
                )
            out.append((imp.right, ha or hi))
        elif isinstance(step, Nec):
            _ref(k, step.premise)
            a, ha = out[step.premise - 1]
            if ha:
                raise ProofRejected(k, f"necessitation of step {step.premise}, which depends on hypotheses")
            out.append((Box(a), False))
        else:
            raise ProofRejected(k, f"unknown step {step!r}")
    return out


def verify_derivation(d: Derivation) -> Formula:
    """Check every step and return the conclusion (the last step's formula)."""
    if not d.steps:
        raise ProofRejected(0, "empty derivation")
    return check_steps(d)[-1][0]


def is_hypothesis_free(d: Derivation) -> bool:
    return not check_steps(d)[-1][1]
