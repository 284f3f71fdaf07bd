"""Derivation generators for B' (from B) and for Z (from B0)."""
from __future__ import annotations

import itertools

from ..formula import (
    BOT, And, Box, Formula, Imp, Or, Rhd, conj, disj, equiv, flatten, render_formula,
)
from ..formula.classes import in_bs1
from ..formula.normal import box_set, boxed_basis, dnf_disjuncts, full_dnf
from ..formula.schemas import get_schema, instantiate
from .kernel import MP, Ax, Derivation, Nec, ProofError, Taut

MAX_BASIS = 6


class ProofBuilder:
    """Accumulates steps; facts may be stated under a fixed assumption ``H`` as ``H -> X``.

    Identical formulas are proved once and reused.
    """

    def __init__(self, enabled=(), assumption: Formula | None = None):
        self.steps: list = []
        self.formulas: list[Formula] = []
        self.seen: dict[Formula, int] = {}
        self.enabled = frozenset(enabled)
        self.assumption = assumption

    def _add(self, step, formula: Formula) -> int:
        if formula in self.seen:
            return self.seen[formula]
        self.steps.append(step)
        self.formulas.append(formula)
        self.seen[formula] = len(self.steps)
        return len(self.steps)

    def formula(self, i: int) -> Formula:
        return self.formulas[i - 1]

    def taut(self, f: Formula) -> int:
        return self._add(Taut(f), f)

    def ax(self, schema_id: str, assignment: dict) -> int:
        f = instantiate(schema_id, assignment)
        return self._add(Ax(schema_id, f), f)

    def mp(self, i: int, j: int) -> int:
        return self._add(MP(i, j), self.formula(j).right)

    def nec(self, i: int) -> int:
        return self._add(Nec(i), Box(self.formula(i)))

    def glue(self, premises: list[int], goal: Formula) -> int:
        """``goal`` from premises by one tautology ``P1 -> ... -> Pn -> goal`` and MPs."""
        if goal in self.seen:
            return self.seen[goal]
        f = goal
        for i in reversed(premises):
            f = Imp(self.formula(i), f)
        k = self.taut(f)
        for i in premises:
            k = self.mp(i, k)
        return k

    # facts of the form [H ->] X |> Y

    def body(self, i: int) -> tuple[Formula, bool]:
        f = self.formula(i)
        if self.assumption is not None and isinstance(f, Imp) and f.left == self.assumption:
            return f.right, True
        return f, False

    def state(self, g: Formula, conditional: bool) -> Formula:
        return Imp(self.assumption, g) if conditional else g

    def assume(self) -> int:
        """``H -> H``, the starting fact under the assumption."""
        return self.taut(Imp(self.assumption, self.assumption))

    def conditional(self, i: int) -> int:
        """Restate an unconditional fact under the assumption."""
        g, c = self.body(i)
        return i if c else self.glue([i], self.state(g, True))

    def j1(self, x: Formula, y: Formula) -> int:
        """``x |> y`` for a tautological ``x -> y``."""
        goal = Rhd(x, y)
        if goal in self.seen:
            return self.seen[goal]
        t = self.taut(Imp(x, y))
        n = self.nec(t)
        return self.mp(n, self.ax("J1", {"A": x, "B": y}))

    def trans(self, i: int, j: int) -> int:
        (xy, ci), (yz, cj) = self.body(i), self.body(j)
        if xy.right != yz.left:
            raise ProofError("J2 chain does not match")
        a = self.ax("J2", {"A": xy.left, "B": xy.right, "C": yz.right})
        return self.glue([i, j, a], self.state(Rhd(xy.left, yz.right), ci or cj))

    def weaken(self, i: int, left: Formula, right: Formula) -> int:
        """From ``x |> y`` get ``left |> right`` given tautologies ``left -> x`` and ``y -> right``."""
        xy, _ = self.body(i)
        if xy.right != right:
            i = self.trans(i, self.j1(xy.right, right))
        if xy.left != left:
            i = self.trans(self.j1(left, xy.left), i)
        return i

    def join(self, facts: list[int], target: Formula) -> int:
        """From ``X_k |> target`` for each ``k``, get ``X_1 | ... | X_n |> target``."""
        if not facts:
            return self.j1(BOT, target)
        acc = facts[0]
        for i in facts[1:]:
            (a, ca), (b, cb) = self.body(acc), self.body(i)
            ax = self.ax("J3", {"A": a.left, "B": b.left, "C": target})
            acc = self.glue([acc, i, ax], self.state(Rhd(Or(a.left, b.left), target), ca or cb))
        return acc

    def apply_b(self, i: int, boxed: Formula, schema: str) -> int:
        """From ``x |> y`` get ``x & []c |> y & []c`` for ``boxed = []c``."""
        xy, c = self.body(i)
        a = self.ax(schema, {"A": xy.left, "B": xy.right, "C": boxed.arg})
        goal = self.state(Rhd(And(xy.left, boxed), And(xy.right, boxed)), c)
        if not c:
            return self.mp(i, a)
        return self.glue([i, a], goal)

    def build(self, final: int) -> Derivation:
        """The derivation concluding with step ``final`` (repeated at the end if needed)."""
        steps = list(self.steps)
        if final != len(steps):
            steps.append(steps[final - 1])
        return Derivation(tuple(steps), (), self.enabled)


def _dedupe(items):
    return list(dict.fromkeys(items))


def b_prime_steps(pb: ProofBuilder, i: int, C: Formula, schema: str = "B") -> int:
    """From a fact ``A |> B`` derive ``A & C |> B & C`` for a CNF ``C`` of boxed formulas."""
    ab, _ = pb.body(i)
    A, B = ab.left, ab.right
    clauses = [_dedupe(flatten(cl, Or)) for cl in flatten(C, And)]
    choices = _dedupe(tuple(_dedupe(pick)) for pick in itertools.product(*clauses))
    facts = []
    target = And(B, C)
    for pick in choices:
        k = i
        for boxed in pick:
            k = pb.apply_b(k, boxed, schema)
        xy, _ = pb.body(k)
        facts.append(pb.weaken(k, xy.left, target))
    k = pb.join(facts, target)
    return pb.weaken(k, And(A, C), target)


def derive_b_prime(A: Formula, B: Formula, C: Formula, schema: str = "B") -> Derivation:
    """Derivation of ``A |> B -> A & C |> B & C`` using instances of ``schema`` (B or some B<i>)."""
    get_schema("Bprime").check({"A": A, "B": B, "C": C})
    get_schema(schema).check({"A": A, "B": B, "C": B})
    H = Rhd(A, B)
    pb = ProofBuilder({schema}, assumption=H)
    k = pb.conditional(b_prime_steps(pb, pb.assume(), C, schema))
    assert pb.formula(k) == Imp(H, Rhd(And(A, C), And(B, C)))
    return pb.build(k)


def derive_z(A: Formula, B: Formula) -> Derivation:
    """Derivation of ``(A == B) -> A |> A & B`` for BS1 formulas from B0 and the IL axioms.

    Both sides are put in full DNF over their shared boxed basis; every
    disjunct ``D`` is shown to interpret ``A & B``, largest box-sets first.
    """
    for side, f in (("A", A), ("B", B)):
        if not in_bs1(f):
            raise ProofError(f"{side} = {render_formula(f)} is not in BS1")
    basis = boxed_basis(And(A, B))
    if len(basis) > MAX_BASIS:
        raise ProofError(f"basis of {len(basis)} boxed formulas exceeds the budget of {MAX_BASIS}")
    H = equiv(A, B)
    T = And(A, B)
    pb = ProofBuilder({"B0"}, assumption=H)
    own = {"A": A, "B": B}
    dnfs = {"A": dnf_disjuncts(full_dnf(A, basis)), "B": dnf_disjuncts(full_dnf(B, basis))}
    # the side's own |> the other side, from the assumption
    towards = {
        "A": pb.glue([pb.assume()], Imp(H, Rhd(A, B))),
        "B": pb.glue([pb.assume()], Imp(H, Rhd(B, A))),
    }

    entries = {}  # rendering -> (disjunct, box-set, side)
    for side in ("A", "B"):
        for D in dnfs[side]:
            entries.setdefault(render_formula(D), (D, box_set(D, basis), side))
    order = sorted(entries.values(), key=lambda e: -len(e[1]))
    done: dict[str, int] = {}

    for D, boxes, side in order:
        other = "B" if side == "A" else "A"
        O = own[other]
        # D |> O under H
        k = pb.trans(pb.j1(D, own[side]), towards[side])
        # D |> O & D-box via B0, one boxed conjunct at a time
        dbox = [basis[j] for j in sorted(boxes)]
        if dbox:
            k = b_prime_steps(pb, k, conj(dbox), "B0")
            k = pb.weaken(k, D, And(O, conj(dbox)))
        # O & D-box implies the disjuncts of O whose box-set contains D's;
        # D itself is replaced by A & B, which it implies
        parts, facts = [], []
        for E in dnfs[other]:
            if not box_set(E, basis) >= boxes:
                continue
            r = render_formula(E)
            if r == render_formula(D):
                parts.append(T)
                facts.append(pb.j1(T, T))
            else:
                parts.append(E)
                facts.append(done[r])
        k = pb.weaken(k, D, disj(parts))
        done[render_formula(D)] = pb.trans(k, pb.join(facts, T))

    k = pb.join([done[render_formula(D)] for D in dnfs["A"]], T)
    k = pb.conditional(pb.weaken(k, A, T))
    assert pb.formula(k) == Imp(H, Rhd(A, T))
    return pb.build(k)
