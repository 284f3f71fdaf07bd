"""Propositional structure over modal atoms: atom extraction, full DNF, box-sets."""
from __future__ import annotations

from .classes import in_bs1
from .parser import render_formula
from .syntax import (
    BOT, And, Bot, Box, Formula, Imp, Not, Or, Rhd, Var, conj, disj, flatten,
)


class NormalFormError(ValueError):
    pass


def _maximal(f: Formula, keep, out: dict) -> None:
    if keep(f):
        out.setdefault(f, None)
    elif isinstance(f, (And, Or, Imp, Rhd)):
        _maximal(f.left, keep, out)
        _maximal(f.right, keep, out)
    elif isinstance(f, (Not, Box)):
        _maximal(f.arg, keep, out)


def boxed_basis(f: Formula) -> list[Formula]:
    """Maximal boxed subformulas of ``f``, deduplicated and sorted by rendering."""
    out: dict = {}
    _maximal(f, lambda g: isinstance(g, Box), out)
    return sorted(out, key=render_formula)


def modal_atoms(f: Formula) -> list[Formula]:
    """Propositional atoms of ``f``: maximal box/rhd subformulas, variables and false.

    Ordered by first occurrence, left to right.
    """
    out: dict = {}
    _maximal(f, lambda g: isinstance(g, (Box, Rhd, Var, Bot)), out)
    return list(out)


def evaluate(f: Formula, value) -> bool:
    """Evaluate the boolean skeleton of ``f``; ``value(atom)`` decides atoms.

    ``false`` is always false and is never handed to ``value``.
    """
    if isinstance(f, Bot):
        return False
    if isinstance(f, Not):
        return not evaluate(f.arg, value)
    if isinstance(f, And):
        return evaluate(f.left, value) and evaluate(f.right, value)
    if isinstance(f, Or):
        return evaluate(f.left, value) or evaluate(f.right, value)
    if isinstance(f, Imp):
        return (not evaluate(f.left, value)) or evaluate(f.right, value)
    return value(f)


def evaluate_bits(f: Formula, atom_bits: dict, full: int) -> int:
    """Bit-parallel truth table: each atom maps to an int whose bits are rows."""
    memo: dict = {}

    def ev(g):
        try:
            return memo[g]
        except KeyError:
            pass
        if isinstance(g, Bot):
            r = 0
        elif isinstance(g, Not):
            r = full ^ ev(g.arg)
        elif isinstance(g, And):
            r = ev(g.left) & ev(g.right)
        elif isinstance(g, Or):
            r = ev(g.left) | ev(g.right)
        elif isinstance(g, Imp):
            r = (full ^ ev(g.left)) | ev(g.right)
        else:
            r = atom_bits[g]
        memo[g] = r
        return r

    return ev(f)


def bit_pattern(bit: int, rows: int) -> int:
    """Mask of the rows (0..rows-1) whose index has ``bit`` set."""
    half = 1 << bit
    m = ((1 << half) - 1) << half
    width = half << 1
    while width < rows:
        m |= m << width
        width <<= 1
    return m & ((1 << rows) - 1)


def row_masks(k: int) -> tuple[list[int], int]:
    """Column masks for a ``2**k``-row truth table; atom ``j`` is bit ``k-1-j`` of the row."""
    rows = 1 << k
    full = (1 << rows) - 1
    return [bit_pattern(k - 1 - j, rows) for j in range(k)], full


def _sign_vectors(n: int):
    # binary counting with "+" as 0: (+,...,+) first, (-,...,-) last
    for k in range(1 << n):
        yield tuple(not (k >> (n - 1 - i)) & 1 for i in range(n))


def signed_conjunct(basis: list[Formula], signs) -> Formula:
    return conj(c if s else Not(c) for c, s in zip(basis, signs))


def full_dnf(f: Formula, basis: list[Formula]) -> Formula:
    """Full disjunctive normal form of a BS1 formula over ``basis``.

    Disjuncts follow binary counting of sign vectors, all-positive first.
    A contradiction gives ``false``.
    """
    if not in_bs1(f):
        raise NormalFormError(f"not a BS1 formula: {render_formula(f)}")
    if any(not isinstance(c, Box) for c in basis):
        raise NormalFormError("basis elements must be boxed formulas")
    index = {c: i for i, c in enumerate(basis)}
    for c in boxed_basis(f):
        if c not in index:
            raise NormalFormError(f"boxed subformula {render_formula(c)} missing from basis")
    disjuncts = []
    for signs in _sign_vectors(len(basis)):
        if evaluate(f, lambda atom: signs[index[atom]]):
            disjuncts.append(signed_conjunct(basis, signs))
    return disj(disjuncts)


def dnf_disjuncts(dnf: Formula) -> list[Formula]:
    if isinstance(dnf, Bot):
        return []
    return flatten(dnf, Or)


def box_set(disjunct: Formula, basis: list[Formula]) -> frozenset[int]:
    """Indices of basis elements occurring positively in a full-DNF conjunct."""
    if not basis:
        if disjunct == Not(BOT):
            return frozenset()
        raise NormalFormError("over an empty basis the only disjunct is true")
    parts = flatten(disjunct, And)
    if len(parts) != len(basis):
        raise NormalFormError("disjunct does not have one literal per basis element")
    out = set()
    for i, (lit, c) in enumerate(zip(parts, basis)):
        if lit == c:
            out.add(i)
        elif lit != Not(c):
            raise NormalFormError(
                f"literal {i} is {render_formula(lit)}, expected ±{render_formula(c)}"
            )
    return frozenset(out)


__all__ = [
    "NormalFormError", "boxed_basis", "modal_atoms", "evaluate", "evaluate_bits",
    "row_masks", "bit_pattern", "full_dnf", "dnf_disjuncts", "box_set", "signed_conjunct",
]
