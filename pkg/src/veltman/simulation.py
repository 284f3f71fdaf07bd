"""Look-alike relations between worlds and the frame conditions built on them.

``bis_level(frame, i)`` is the i-th approximation: level 0 relates worlds
with equal R-successor sets, and each round keeps ``(b, u)`` only if every
successor ``c`` of ``b`` is matched by a successor ``c'`` of ``u`` that is
related to ``c`` at the previous level and whose ``S_u``-successors are
among the ``S_b``-successors of ``c``.  The rounds stabilise, and the limit
is the largest B-simulation of the frame.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Union

from .formula import And, Box, Formula, Imp, Not, Rhd, Var, conj, diamond
from .semantics import VeltmanFrame, VeltmanModel

Pair = tuple[int, int]


class SimulationError(ValueError):
    pass


@dataclass(frozen=True)
class SimRelation:
    level: Union[int, str]  # a natural number, or "fixpoint"
    pairs: frozenset[Pair]

    def __contains__(self, pair) -> bool:
        return pair in self.pairs

    def row(self, b: int) -> frozenset[int]:
        return frozenset(u for (x, u) in self.pairs if x == b)


def _level0(frame: VeltmanFrame) -> frozenset[Pair]:
    up = frame.up
    return frozenset((b, u) for b in frame.worlds for u in frame.worlds if up[b] == up[u])


def _refine(frame: VeltmanFrame, rel: frozenset[Pair]) -> frozenset[Pair]:
    up = frame.up
    keep = set()
    for b, u in rel:
        if all(
            any((c, c2) in rel and frame.s_succ(u, c2) <= frame.s_succ(b, c) for c2 in up[u])
            for c in up[b]
        ):
            keep.add((b, u))
    return frozenset(keep)


def bis_level(frame: VeltmanFrame, n: int) -> SimRelation:
    rel = _level0(frame)
    for _ in range(n):
        nxt = _refine(frame, rel)
        if nxt == rel:
            break
        rel = nxt
    return SimRelation(n, rel)


def bis_levels(frame: VeltmanFrame, upto: int) -> list[SimRelation]:
    """``[bis_0, ..., bis_upto]`` computed in one pass."""
    rel = _level0(frame)
    out = [SimRelation(0, rel)]
    for k in range(1, upto + 1):
        rel = _refine(frame, rel)
        out.append(SimRelation(k, rel))
    return out


def stabilization_round(frame: VeltmanFrame) -> int:
    """First round ``k`` with ``bis_k == bis_{k+1}``."""
    rel, k = _level0(frame), 0
    while True:
        nxt = _refine(frame, rel)
        if nxt == rel:
            return k
        rel, k = nxt, k + 1


def greatest_b_simulation(frame: VeltmanFrame) -> SimRelation:
    rel = _level0(frame)
    while True:
        nxt = _refine(frame, rel)
        if nxt == rel:
            return SimRelation("fixpoint", rel)
        rel = nxt


def is_b_simulation(frame: VeltmanFrame, pairs) -> bool:
    """Both B-simulation clauses, with the witness ``y'`` taken as an ``S_x``-successor of ``y``."""
    up = frame.up
    pairs = frozenset(pairs)
    for x, x2 in pairs:
        if up[x] != up[x2]:
            return False
        for y in up[x]:
            if not any(
                (y, y2) in pairs and frame.s_succ(x2, y2) <= frame.s_succ(x, y)
                for y2 in frame.s_succ(x, y)
            ):
                return False
    return True


def depth(frame: VeltmanFrame, x: int) -> int:
    return frame.depths[x]


def frame_depth(frame: VeltmanFrame) -> int:
    return max(frame.depths)


def _ci_holds_at(frame: VeltmanFrame, a: int, b: int, bis: frozenset[Pair]) -> bool:
    up = frame.up
    return any(
        (b, u) in bis
        and all(e in up[b] for d in frame.s_succ(a, u) for e in up[d])
        for u in frame.s_succ(a, b)
    )


def check_ci(frame: VeltmanFrame, i: int, bis: SimRelation | None = None) -> tuple[bool, Pair | None]:
    """Condition C_i: every ``aRb`` has some ``u`` with ``b S_a u``, ``bis_i(b, u)``
    and every ``d, e`` with ``u S_a d R e`` satisfying ``bRe``.

    Returns ``(holds, first failing (a, b))``.
    """
    rel = (bis or bis_level(frame, i)).pairs
    for a, b in sorted(frame.R):
        if not _ci_holds_at(frame, a, b, rel):
            return False, (a, b)
    return True, None


def check_cb(frame: VeltmanFrame, variant: str = "e") -> tuple[bool, Pair | None]:
    """Condition C_B decided with the largest B-simulation.

    ``variant="e"`` ends the condition with ``yRe`` (as C_i does);
    ``variant="d"`` uses the alternative ending ``yRd``.
    """
    if variant not in ("e", "d"):
        raise ValueError("variant must be 'e' or 'd'")
    rel = greatest_b_simulation(frame).pairs
    up = frame.up
    for x, y in sorted(frame.R):
        ok = any(
            (y, y2) in rel
            and all(
                (e in up[y]) if variant == "e" else (d in up[y])
                for d in frame.s_succ(x, y2) for e in up[d]
            )
            for y2 in frame.s_succ(x, y)
        )
        if not ok:
            return False, (x, y)
    return True, None


# -- characteristic formulas ----------------------------------------------------

@dataclass(frozen=True)
class CharacteristicResult:
    formula: Formula
    valuation: dict[str, frozenset[int]]

    @property
    def reserved(self) -> list[str]:
        return sorted(self.valuation)

    def model(self, frame: VeltmanFrame) -> VeltmanModel:
        return VeltmanModel(frame, dict(self.valuation))


def _characteristic(frame: VeltmanFrame, b: int, i: int, memo: dict):
    key = (b, i)
    if key in memo:
        return memo[key]
    xs = sorted(frame.up[b])
    if i == 0:
        r = f"#r0_{b}"
        valuation = {r: frame.up[b]}
        parts = [Box(Var(r))]
        for j, x in enumerate(xs):
            p = f"#p0_{b}_{j}"
            valuation[p] = frozenset({x})
            parts.append(diamond(Var(p)))
    else:
        prev, prev_val = _characteristic(frame, b, i - 1, memo)
        valuation = dict(prev_val)
        parts = [prev]
        for j, x in enumerate(xs):
            sub, sub_val = _characteristic(frame, x, i - 1, memo)
            valuation.update(sub_val)
            q = f"#q{i}_{b}_{j}"
            # q_j fails exactly on the S_b-successors of x_j
            valuation[q] = frozenset(y for y in frame.worlds if y not in frame.s_succ(b, x))
            parts.append(Not(Rhd(sub, Var(q))))
    out = (conj(parts), valuation)
    memo[key] = out
    return out


def characteristic_formula(frame: VeltmanFrame, b: int, i: int) -> CharacteristicResult:
    """Formula in ES2^i and valuation under which exactly the ``bis_i``-row of ``b`` forces it."""
    if not 0 <= b < frame.n:
        raise SimulationError(f"world {b} out of range")
    formula, valuation = _characteristic(frame, b, i, {})
    return CharacteristicResult(formula, valuation)


# -- counter-valuation for a failing C_i ----------------------------------------

class Counterexample(NamedTuple):
    model: VeltmanModel
    antecedent: Formula
    consequent: Formula
    world: int

    @property
    def instance(self) -> Formula:
        return Imp(self.antecedent, self.consequent)


def ci_counterexample(frame: VeltmanFrame, i: int, witness: Pair) -> Counterexample:
    """Refute a B_i instance at ``a`` from a pair ``(a, b)`` where C_i fails.

    Antecedent ``A |> #q`` and consequent ``A & []#s |> #q & []#s`` with ``A``
    the level-``i`` characteristic formula of ``b``; ``a`` forces the first and
    refutes the second.
    """
    a, b = witness
    if (a, b) not in frame.R:
        raise SimulationError(f"({a}, {b}) is not an R-pair")
    bis = bis_level(frame, i).pairs
    if _ci_holds_at(frame, a, b, bis):
        raise SimulationError(f"C_{i} does not fail at ({a}, {b})")
    char = characteristic_formula(frame, b, i)
    up = frame.up
    bad = {d for d in frame.s_succ(a, b) if any(e not in up[b] for e in up[d])}
    outside = {y for y in frame.worlds if y not in frame.s_succ(a, b)}
    valuation = dict(char.valuation)
    valuation["#q"] = frozenset(bad | outside)
    valuation["#s"] = up[b]
    q, s = Var("#q"), Var("#s")
    A = char.formula
    return Counterexample(
        VeltmanModel(frame, valuation),
        Rhd(A, q),
        Rhd(And(A, Box(s)), And(q, Box(s))),
        a,
    )
