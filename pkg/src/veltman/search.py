"""Bounded search over small frames and valuations.

Valuation sweeps are bit-parallel: for ``k`` variables on ``n`` worlds a
formula's extension is a list of ``n`` integers, bit ``v`` of entry ``w``
saying whether world ``w`` forces the formula under valuation number ``v``.
Valuation ``v`` makes variable ``j`` true at world ``w`` iff bit
``j*n + (n-1-w)`` of ``v`` is set, so lower-numbered worlds weigh more.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Callable, Iterable, Iterator

from .formula import (
    And, Bot, Box, Formula, Imp, Not, Or, Rhd, Var, parse_formula, render_formula, variables,
)
from .formula.normal import bit_pattern
from .semantics import (
    VeltmanFrame, VeltmanModel, check_condition, forces, format_frame, load_model, validate_frame,
)

MAX_WORLDS = 5
MAX_VARIABLES = 4


class SearchError(ValueError):
    pass


# -- frame enumeration -----------------------------------------------------------

def _posets(n: int) -> list[tuple[frozenset, ...]]:
    """Strict partial orders on ``0..n-1`` as tuples of successor sets."""
    if n == 0:
        return [()]
    out = []
    for up in _posets(n - 1):
        down = [frozenset(x for x in range(n - 1) if y in up[x]) for y in range(n - 1)]
        for below_bits in range(1 << (n - 1)):
            below = {x for x in range(n - 1) if below_bits >> x & 1}
            # below-set must be downward closed
            if any(not down[x] <= below for x in below):
                continue
            for above_bits in range(1 << (n - 1)):
                above = {y for y in range(n - 1) if above_bits >> y & 1}
                if above & below or any(not up[y] <= above for y in above):
                    continue
                if any(y not in up[x] for x in below for y in above):
                    continue
                new_up = [up[x] | {n - 1} if x in below else up[x] for x in range(n - 1)]
                new_up.append(frozenset(above))
                out.append(tuple(frozenset(s) for s in new_up))
    return out


@lru_cache(maxsize=None)
def _s_choices(worlds: tuple[int, ...], order: frozenset) -> list[frozenset]:
    """Transitive relations on ``worlds`` containing the reflexive pairs and ``order``."""
    mandatory = {(y, y) for y in worlds} | set(order)
    optional = [(y, z) for y in worlds for z in worlds if (y, z) not in mandatory]
    out = []
    for bits in range(1 << len(optional)):
        rel = set(mandatory)
        rel.update(p for k, p in enumerate(optional) if bits >> k & 1)
        succ: dict[int, set] = {}
        for y, z in rel:
            succ.setdefault(y, set()).add(z)
        if all(succ.get(z, set()) <= succ[y] for y, z in rel):
            out.append(frozenset(rel))
    return out


def enumerate_frames(max_worlds: int) -> Iterator[VeltmanFrame]:
    """All labelled Veltman frames with 1..max_worlds worlds, in a fixed order."""
    if max_worlds > MAX_WORLDS:
        raise SearchError(f"at most {MAX_WORLDS} worlds can be enumerated")
    for n in range(1, max_worlds + 1):
        for up in _posets(n):
            R = frozenset((x, y) for x in range(n) for y in up[x])
            per_world = []
            for x in range(n):
                above = tuple(sorted(up[x]))
                order = frozenset((y, z) for y in above for z in up[y])
                per_world.append(_s_choices(above, order))
            for S in itertools.product(*per_world):
                yield VeltmanFrame(n, R, tuple(S))


def count_frames(max_worlds: int) -> int:
    return sum(1 for _ in enumerate_frames(max_worlds))


# -- bit-parallel valuation sweep ---------------------------------------------------

@dataclass(frozen=True)
class ValuationSpace:
    """All valuations of ``names`` on ``n`` worlds, packed into integer bit positions."""

    n: int
    names: tuple[str, ...]

    @property
    def size(self) -> int:
        return 1 << (self.n * len(self.names))

    @property
    def full(self) -> int:
        return (1 << self.size) - 1

    @property
    def var_bits(self) -> dict[str, tuple[int, ...]]:
        return _var_bits(self.n, self.names)

    def decode(self, index: int) -> dict[str, frozenset[int]]:
        return {
            name: frozenset(w for w in range(self.n) if index >> (j * self.n + self.n - 1 - w) & 1)
            for j, name in enumerate(self.names)
        }


@lru_cache(maxsize=256)
def _var_bits(n: int, names: tuple[str, ...]) -> dict[str, tuple[int, ...]]:
    size = 1 << (n * len(names))
    return {
        name: tuple(bit_pattern(j * n + n - 1 - w, size) for w in range(n))
        for j, name in enumerate(names)
    }


def sweep(frame: VeltmanFrame, f: Formula, space: ValuationSpace, memo: dict | None = None) -> list[int]:
    """Extension of ``f`` at every world under every valuation of ``space``."""
    memo = {} if memo is None else memo
    full = space.full
    var_bits = space.var_bits
    n = frame.n
    zero = [0] * n

    def ev(g):
        try:
            return memo[g]
        except KeyError:
            pass
        if isinstance(g, Var):
            out = list(var_bits.get(g.name, zero))
        elif isinstance(g, Bot):
            out = zero
        elif isinstance(g, Not):
            out = [full ^ x for x in ev(g.arg)]
        elif isinstance(g, And):
            out = [x & y for x, y in zip(ev(g.left), ev(g.right))]
        elif isinstance(g, Or):
            out = [x | y for x, y in zip(ev(g.left), ev(g.right))]
        elif isinstance(g, Imp):
            out = [(full ^ x) | y for x, y in zip(ev(g.left), ev(g.right))]
        elif isinstance(g, Box):
            a = ev(g.arg)
            out = []
            for w in range(n):
                acc = full
                for v in frame.up[w]:
                    acc &= a[v]
                out.append(acc)
        elif isinstance(g, Rhd):
            a, b = ev(g.left), ev(g.right)
            out = []
            for w in range(n):
                acc = full
                for u in frame.up[w]:
                    reach = 0
                    for v in frame.s_succ(w, u):
                        reach |= b[v]
                    acc &= (full ^ a[u]) | reach
                out.append(acc)
        else:
            raise TypeError(f"not a formula: {g!r}")
        memo[g] = out
        return out

    return ev(f)


def _first_refutation(ext: list[int], full: int) -> tuple[int, int] | None:
    best = None
    for w, bits in enumerate(ext):
        bad = full ^ bits
        if bad:
            index = (bad & -bad).bit_length() - 1
            if best is None or (index, w) < best:
                best = (index, w)
    return best


def instance_valid_on_frame(frame: VeltmanFrame, inst: Formula | str):
    """Exhaustively test ``inst`` at every world under every valuation of its variables.

    Returns ``(True, None)`` or ``(False, (valuation, world))`` for the least
    refuting valuation number.
    """
    if isinstance(inst, str):
        inst = parse_formula(inst)
    names = tuple(variables(inst))
    if len(names) > MAX_VARIABLES:
        raise SearchError(f"{len(names)} variables exceed the cap of {MAX_VARIABLES}")
    space = ValuationSpace(frame.n, names)
    hit = _first_refutation(sweep(frame, inst, space), space.full)
    if hit is None:
        return True, None
    index, world = hit
    return False, (space.decode(index), world)


def pool_valid_on_frame(frame: VeltmanFrame, pool: Iterable[Formula]):
    """``(True, None)`` or ``(False, (instance, valuation, world))`` for the first refuted instance."""
    for inst in pool:
        ok, witness = instance_valid_on_frame(frame, inst)
        if not ok:
            return False, (inst, *witness)
    return True, None


# -- pools and fixtures ----------------------------------------------------------------

POOL_IDS = ("B0", "M", "M0", "P", "R", "Rstar", "W", "Z")


@lru_cache(maxsize=None)
def load_pool(schema_id: str) -> tuple[Formula, ...]:
    """The shipped instance pool for a schema, one formula per line."""
    try:
        text = resources.files("veltman.data.pools").joinpath(f"{schema_id}.txt").read_text()
    except FileNotFoundError:
        raise SearchError(f"no shipped pool for schema {schema_id!r}") from None
    return tuple(
        parse_formula(line) for line in text.splitlines() if line.strip() and not line.startswith("#")
    )


def pool_version(schema_id: str) -> str:
    text = resources.files("veltman.data.pools").joinpath(f"{schema_id}.txt").read_text()
    for line in text.splitlines():
        if line.startswith("# version"):
            return line.split(":", 1)[1].strip()
    return "unversioned"


FIXTURE_IDS = ("zambella_ilp", "b_not_w", "b_w_not_r")


def fixture_text(fixture_id: str) -> str:
    if fixture_id not in FIXTURE_IDS:
        raise SearchError(f"unknown fixture {fixture_id!r}; choose from {', '.join(FIXTURE_IDS)}")
    return resources.files("veltman.data.fixtures").joinpath(f"{fixture_id}.vf").read_text()


def fixtures(fixture_id: str) -> VeltmanModel:
    return load_model(fixture_text(fixture_id))


# -- countermodel search ---------------------------------------------------------------

@dataclass
class SearchReport:
    schema: str
    max_worlds: int
    max_variables: int
    pool: str
    frames_checked: int = 0
    frame: VeltmanFrame | None = None
    valuation: dict | None = None
    world: int | None = None
    instance: Formula | None = None
    require: tuple[str, ...] = field(default_factory=tuple)

    @property
    def found(self) -> bool:
        return self.frame is not None

    @property
    def outcome(self) -> str:
        return "countermodel" if self.found else "validated-within-bounds"

    def model(self) -> VeltmanModel:
        return VeltmanModel(self.frame, self.valuation)

    def reverify(self) -> bool:
        """Independent re-check of a countermodel with the plain forcing relation."""
        return self.found and not forces(self.model(), self.world, self.instance)

    def lines(self) -> list[str]:
        head = (
            f"schema {self.schema}; max worlds {self.max_worlds}; pool {self.pool}; "
            f"frames checked {self.frames_checked}"
        )
        if self.require:
            head += f"; require {', '.join(self.require)}"
        if not self.found:
            return [head, "outcome: validated-within-bounds"]
        return [
            head,
            "outcome: countermodel",
            f"instance: {render_formula(self.instance)}",
            f"world: {self.world}",
        ]

    def model_text(self) -> str:
        return format_frame(
            self.frame, self.valuation,
            comments=[f"refutes {render_formula(self.instance)} at world {self.world}"],
        )


SideCondition = Callable[[VeltmanFrame], bool]


def as_side_condition(require: str | SideCondition | None) -> SideCondition:
    if require is None:
        return lambda fr: True
    if callable(require):
        return require
    return lambda fr: check_condition(fr, require)[0]


def find_frame_countermodel(
    pool: Iterable[Formula] | str,
    max_worlds: int,
    require: Iterable[str | SideCondition] | str | None = None,
    schema: str | None = None,
) -> SearchReport | None:
    """First enumerated frame meeting every side condition on which some pool
    instance is refuted; ``None`` when all frames up to the bound validate the pool.

    ``pool`` may be a shipped pool id.  Side conditions are frame-condition
    names (``"P"``, ``"W"``, ``"C:0"``, ``"CB"``, ...) or predicates on frames.
    """
    if isinstance(pool, str):
        schema = schema or pool
        pool_name = f"{pool}@{pool_version(pool)}"
        pool = load_pool(pool)
    else:
        pool = tuple(pool)
        pool_name = "custom"
    if isinstance(require, str) or callable(require):
        require = [require]
    require = list(require or [])
    tests = [as_side_condition(r) for r in require]
    names = {v for inst in pool for v in variables(inst)}
    if any(len(variables(inst)) > MAX_VARIABLES for inst in pool):
        raise SearchError(f"pool instances may use at most {MAX_VARIABLES} variables")
    report = SearchReport(
        schema or "custom", max_worlds, len(names), pool_name,
        require=tuple(r if isinstance(r, str) else getattr(r, "__name__", "predicate") for r in require),
    )
    for frame in enumerate_frames(max_worlds):
        if not all(t(frame) for t in tests):
            continue
        report.frames_checked += 1
        ok, witness = pool_valid_on_frame(frame, pool)
        if not ok:
            inst, valuation, world = witness
            report.frame, report.valuation, report.world, report.instance = frame, valuation, world, inst
            return report
    return None


def search_schema(schema_id: str, max_worlds: int, require=None) -> SearchReport:
    """Like :func:`find_frame_countermodel` on a shipped pool, but always returns a report."""
    found = find_frame_countermodel(schema_id, max_worlds, require)
    if found is not None:
        return found
    report = SearchReport(
        schema_id, max_worlds, len({v for i in load_pool(schema_id) for v in variables(i)}),
        f"{schema_id}@{pool_version(schema_id)}",
        require=tuple([require] if isinstance(require, str) else (require or ())),
    )
    report.frames_checked = sum(
        1 for fr in enumerate_frames(max_worlds)
        if all(as_side_condition(r)(fr) for r in report.require)
    )
    return report


def frames_where(max_worlds: int, *conditions: str) -> Iterator[VeltmanFrame]:
    tests = [as_side_condition(c) for c in conditions]
    for fr in enumerate_frames(max_worlds):
        if all(t(fr) for t in tests):
            yield fr


def assert_valid(frame: VeltmanFrame) -> None:
    violations = validate_frame(frame)
    if violations:
        raise SearchError("; ".join(map(str, violations)))


# -- independence report ---------------------------------------------------------------

@dataclass
class Claim:
    claim: str
    passed: bool
    slug: str
    frame: VeltmanFrame | None = None
    valuation: dict | None = None
    world: int | None = None
    notes: list[str] = field(default_factory=list)
    searched: bool = False

    def witness_text(self) -> str:
        comments = [self.claim, "witness located by bounded search" if self.searched else "fixture"]
        comments += self.notes
        if self.world is not None:
            comments.append(f"world {self.world}")
        return format_frame(self.frame, self.valuation or {}, comments=comments)


def _cond(frame, name):
    return check_condition(frame, name)[0]


def _fixture_claim(claim, slug, fixture_id, expect: dict) -> Claim:
    model = fixtures(fixture_id)
    got = {c: _cond(model.frame, c) for c in expect}
    notes = [f"{c} condition {'holds' if v else 'fails'}" for c, v in got.items()]
    for c, v in got.items():
        if not v:
            notes.append(f"{c} witness {check_condition(model.frame, c)[1]}")
    return Claim(claim, got == expect, slug, model.frame, model.valuation, notes=notes)


def _zambella_claim() -> Claim:
    model = fixtures("zambella_ilp")
    from .formula import instantiate

    inst = instantiate("Z", {"A": "<>p", "B": "<>q"})
    checks = {
        "<>p == <>q forced at 0": forces(model, 0, "<>p == <>q"),
        "p |> p & q refuted at 0": not forces(model, 0, "p |> p & q"),
        "P condition holds": _cond(model.frame, "P"),
    }
    ok, witness = instance_valid_on_frame(model.frame, inst)
    checks["Z instance refuted on the frame"] = not ok
    notes = [f"{k}: {'yes' if v else 'no'}" for k, v in checks.items()]
    if witness:
        val, w = witness
        notes.append(
            "refuting valuation " + ", ".join(f"{k}@{{{','.join(map(str, sorted(v)))}}}" for k, v in val.items())
            + f" at world {w}"
        )
    return Claim("Z is not in ILP", all(checks.values()), "zambella_ilp",
                 model.frame, model.valuation, 0, notes)


def _search_claim(claim, slug, pool, max_worlds, require) -> Claim:
    found = find_frame_countermodel(pool, max_worlds, require)
    if found is None:
        return Claim(claim, False, slug, notes=[f"no countermodel up to {max_worlds} worlds"], searched=True)
    notes = found.lines()[:1] + [f"refutes {render_formula(found.instance)}"]
    return Claim(claim, found.reverify(), slug, found.frame, found.valuation, found.world, notes, True)


def _w_r_not_b(max_worlds: int = MAX_WORLDS) -> Claim:
    from .simulation import check_ci, ci_counterexample

    claim = "W,R do not prove B"
    for frame in enumerate_frames(max_worlds):
        if not (_cond(frame, "W") and _cond(frame, "R")):
            continue
        holds, pair = check_ci(frame, 0)
        if holds:
            continue
        ce = ci_counterexample(frame, 0, pair)
        refuted = forces(ce.model, ce.world, ce.antecedent) and not forces(ce.model, ce.world, ce.consequent)
        notes = [
            "W and R conditions hold, C0 fails at " + str(pair),
            f"B0 instance refuted: {render_formula(ce.instance)}",
        ]
        return Claim(claim, refuted, "w_r_not_b", frame, dict(ce.model.valuation), ce.world, notes, True)
    return Claim(claim, False, "w_r_not_b", notes=[f"no frame up to {max_worlds} worlds"], searched=True)


def _rstar_claim(max_worlds: int = 3) -> Claim:
    rstar, r, w = load_pool("Rstar"), load_pool("R"), load_pool("W")
    frames = mismatches = 0
    first = None
    for frame in enumerate_frames(max_worlds):
        frames += 1
        a = pool_valid_on_frame(frame, rstar)[0]
        b = pool_valid_on_frame(frame, r)[0] and pool_valid_on_frame(frame, w)[0]
        if a != b:
            mismatches += 1
            first = first or frame
    notes = [f"{frames} frames up to {max_worlds} worlds, {mismatches} disagreements"]
    return Claim("R* is the conjunction of R and W", mismatches == 0, "rstar_r_w", first, {}, notes=notes,
                 searched=True)


def independence_report() -> list[Claim]:
    """Fixture checks plus bounded searches for the independence claims among B, W, R, P and Z."""
    return [
        _zambella_claim(),
        _search_claim("Z is not in ILP (searched)", "z_not_ilp_search",
                      [parse_formula("(<>p == <>q) -> <>p |> <>p & <>q")], 5, "P"),
        _fixture_claim("B,R do not prove W", "b_not_w", "b_not_w", {"W": False, "R": True, "CB": True}),
        _search_claim("B does not prove W (searched)", "b_not_w_search", "W", 4, "CB"),
        _fixture_claim("B,W do not prove R", "b_w_not_r", "b_w_not_r", {"R": False, "W": True, "CB": True}),
        _w_r_not_b(),
        _rstar_claim(),
    ]
