"""Finite Veltman frames and models.

A frame has worlds ``0..n-1``, a relation ``R`` and for every world ``x`` a
relation ``S[x]``.  Nothing is checked at construction time; use
:func:`validate_frame`, or the loaders, which close and validate.
"""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

from .formula import And, Bot, Box, Formula, Imp, Not, Or, Rhd, Var, parse_formula

Pair = tuple[int, int]


class FrameError(ValueError):
    """Raised by the loaders on malformed input or a frame that fails validation."""

    def __init__(self, message: str, violations: list | None = None):
        self.violations = violations or []
        super().__init__(message)


@dataclass(frozen=True)
class VeltmanFrame:
    n: int
    R: frozenset[Pair]
    S: tuple[frozenset[Pair], ...]

    @classmethod
    def build(cls, n: int, R: Iterable[Pair] = (), S: Mapping[int, Iterable[Pair]] | None = None):
        S = S or {}
        return cls(n, frozenset(map(tuple, R)), tuple(frozenset(map(tuple, S.get(x, ()))) for x in range(n)))

    @property
    def worlds(self) -> range:
        return range(self.n)

    @cached_property
    def up(self) -> tuple[frozenset[int], ...]:
        """``up[x]`` is the set of R-successors of ``x``."""
        succ = [set() for _ in range(self.n)]
        for x, y in self.R:
            succ[x].add(y)
        return tuple(frozenset(s) for s in succ)

    @cached_property
    def s_up(self) -> tuple[dict[int, frozenset[int]], ...]:
        """``s_up[x][y]`` is the set of ``z`` with ``y S_x z`` (empty if none)."""
        out = []
        for x in range(self.n):
            d: dict[int, set] = {}
            for y, z in self.S[x]:
                d.setdefault(y, set()).add(z)
            out.append({y: frozenset(zs) for y, zs in d.items()})
        return tuple(out)

    def s_succ(self, x: int, y: int) -> frozenset[int]:
        return self.s_up[x].get(y, frozenset())

    @cached_property
    def depths(self) -> tuple[int, ...]:
        """Longest R-chain length from each world; only meaningful on acyclic R."""
        memo: dict[int, int] = {}

        def depth(x, guard=frozenset()):
            if x in memo:
                return memo[x]
            if x in guard:
                raise FrameError(f"R has a cycle through {x}")
            d = max((depth(y, guard | {x}) + 1 for y in self.up[x]), default=0)
            memo[x] = d
            return d

        return tuple(depth(x) for x in range(self.n))


@dataclass(frozen=True, eq=False)
class VeltmanModel:
    frame: VeltmanFrame
    valuation: Mapping[str, frozenset[int]] = field(default_factory=dict)

    def true_at(self, name: str) -> frozenset[int]:
        # unknown variables are false everywhere
        return self.valuation.get(name, frozenset())


@dataclass(frozen=True)
class Violation:
    condition: str
    witness: tuple
    message: str

    def __str__(self) -> str:
        return f"condition {self.condition}: {self.message}"


# -- closure and validation ------------------------------------------------------

def transitive_closure(pairs: Iterable[Pair]) -> frozenset[Pair]:
    rel = set(pairs)
    while True:
        new = {(a, d) for (a, b) in rel for (c, d) in rel if b == c} - rel
        if not new:
            return frozenset(rel)
        rel |= new


def close_r(frame: VeltmanFrame) -> VeltmanFrame:
    return VeltmanFrame(frame.n, transitive_closure(frame.R), frame.S)


def close_s(frame: VeltmanFrame) -> VeltmanFrame:
    """Add the pairs demanded by frame conditions 3 and 4, then close each S_x transitively."""
    S = []
    for x in range(frame.n):
        pairs = set(frame.S[x])
        for y in frame.up[x]:
            pairs.add((y, y))
            pairs.update((y, z) for z in frame.up[y])
        S.append(transitive_closure(pairs))
    return VeltmanFrame(frame.n, frame.R, tuple(S))


def find_cycle(n: int, succ) -> list[int] | None:
    """Shortest cycle through the least world lying on a cycle, as ``[v0, ..., v0]``."""
    for start in range(n):
        parent = {}
        queue = deque([start])
        seen = {start}
        while queue:
            v = queue.popleft()
            for w in sorted(succ(v)):
                if w == start:
                    path = [v]
                    while path[-1] != start:
                        path.append(parent[path[-1]])
                    return [start] + path[::-1][1:] + [start] if v != start else [start, start]
                if w not in seen:
                    seen.add(w)
                    parent[w] = v
                    queue.append(w)
    return None


def _fmt_cycle(cycle: list[int]) -> str:
    return "→".join(map(str, cycle))


def validate_frame(frame: VeltmanFrame) -> list[Violation]:
    """Check the five Veltman frame conditions; one violation per failed condition.

    Witnesses are the lexicographically first offending tuple.
    """
    n, R = frame.n, frame.R
    out: list[Violation] = []
    if n < 1:
        return [Violation("universe", (), "a frame needs at least one world")]
    if len(frame.S) != n:
        return [Violation("universe", (), f"expected {n} S-relations, got {len(frame.S)}")]
    bad = sorted(p for p in R if not all(0 <= v < n for v in p))
    bad += sorted((x,) + p for x in range(n) for p in frame.S[x] if not all(0 <= v < n for v in p))
    if bad:
        return [Violation("universe", bad[0], f"world out of range 0..{n - 1} in {bad[0]}")]

    up = frame.up
    trans = next(
        ((x, y, z) for x in range(n) for y in sorted(up[x]) for z in sorted(up[y]) if z not in up[x]),
        None,
    )
    if trans:
        x, y, z = trans
        out.append(Violation("1", trans, f"R not transitive: {x}R{y}R{z} but not {x}R{z}"))
    cycle = find_cycle(n, lambda v: up[v])
    if cycle:
        out.append(Violation("1", tuple(cycle), f"R not conversely well-founded: R cycle {_fmt_cycle(cycle)}"))

    def first(gen):
        return next(gen, None)

    w = first(
        (x, y, z) for x in range(n) for (y, z) in sorted(frame.S[x]) if y not in up[x] or z not in up[x]
    )
    if w:
        x, y, z = w
        out.append(Violation("2", w, f"{y} S_{x} {z} but not both {x}R{y} and {x}R{z}"))
    w = first((x, y) for x in range(n) for y in sorted(up[x]) if (y, y) not in frame.S[x])
    if w:
        x, y = w
        out.append(Violation("3", w, f"{x}R{y} but not {y} S_{x} {y}"))
    w = first(
        (x, y, z) for x in range(n) for y in sorted(up[x]) for z in sorted(up[y]) if (y, z) not in frame.S[x]
    )
    if w:
        x, y, z = w
        out.append(Violation("4", w, f"{x}R{y}R{z} but not {y} S_{x} {z}"))
    w = first(
        (x, u, v, t)
        for x in range(n)
        for (u, v) in sorted(frame.S[x])
        for t in sorted(frame.s_succ(x, v))
        if (u, t) not in frame.S[x]
    )
    if w:
        x, u, v, t = w
        out.append(Violation("5", w, f"S_{x} not transitive: {u} S_{x} {v} S_{x} {t} but not {u} S_{x} {t}"))
    return out


# -- file format ----------------------------------------------------------------

_LINE = re.compile(r"^\s*(?P<key>worlds|close|R|S\s+\d+|val\s+#?[A-Za-z_][A-Za-z0-9_]*)\s*:(?P<rest>.*)$")


def _strip_comment(line: str) -> str:
    if line.lstrip().startswith("#"):
        return ""
    # "# " or trailing "#" starts a comment; "#name" is a reserved variable
    m = re.search(r"#(\s|$)", line)
    return line[: m.start()] if m else line


def _pairs(text: str, lineno: int) -> list[Pair]:
    out = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = chunk.split()
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise FrameError(f"line {lineno}: expected a pair '<i> <j>', got {chunk!r}")
        out.append((int(parts[0]), int(parts[1])))
    return out


def parse_frame_text(text: str):
    """Parse the line format into ``(n, R, S, valuation, closures)`` without closing or validating."""
    n = None
    R: list[Pair] = []
    S: dict[int, list[Pair]] = {}
    valuation: dict[str, set[int]] = {}
    closures: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        m = _LINE.match(line)
        if not m:
            raise FrameError(f"line {lineno}: cannot parse {raw.strip()!r}")
        key, rest = m.group("key"), m.group("rest").strip()
        if key == "worlds":
            if n is not None:
                raise FrameError(f"line {lineno}: duplicate 'worlds' line")
            if not rest.isdigit() or int(rest) < 1:
                raise FrameError(f"line {lineno}: 'worlds' needs a positive integer")
            n = int(rest)
            continue
        if n is None:
            raise FrameError(f"line {lineno}: 'worlds: <n>' must come first")
        if key == "close":
            for item in (s.strip() for s in rest.split(",")):
                if item not in ("r-transitive", "s-mandatory"):
                    raise FrameError(f"line {lineno}: unknown closure {item!r}")
                closures.append(item)
        elif key == "R":
            R.extend(_pairs(rest, lineno))
        elif key.startswith("S"):
            S.setdefault(int(key.split()[1]), []).extend(_pairs(rest, lineno))
        else:
            name = key.split()[1]
            worlds = rest.split()
            if not all(w.isdigit() for w in worlds):
                raise FrameError(f"line {lineno}: valuation needs world numbers")
            valuation.setdefault(name, set()).update(int(w) for w in worlds)
    if n is None:
        raise FrameError("missing 'worlds: <n>' line")
    for x in S:
        if x >= n:
            raise FrameError(f"S {x}: world out of range 0..{n - 1}")
    for name, ws in valuation.items():
        if any(w >= n for w in ws):
            raise FrameError(f"val {name}: world out of range 0..{n - 1}")
    return n, R, S, valuation, closures


def _close_and_validate(n, R, S, closures) -> VeltmanFrame:
    frame = VeltmanFrame.build(n, R, S)
    # report a cycle as written, before closure collapses it to a loop
    cycle = find_cycle(n, lambda v: {b for a, b in frame.R if a == v})
    if cycle:
        v = Violation("1", tuple(cycle), f"R not conversely well-founded: R cycle {_fmt_cycle(cycle)}")
        raise FrameError(f"invalid Veltman frame:\n  {v}", [v])
    # R first: the mandatory S pairs depend on the closed R
    if "r-transitive" in closures:
        frame = close_r(frame)
    if "s-mandatory" in closures:
        frame = close_s(frame)
    violations = validate_frame(frame)
    if violations:
        raise FrameError("invalid Veltman frame:\n" + "\n".join(f"  {v}" for v in violations), violations)
    return frame


def load_frame(text: str) -> VeltmanFrame:
    """Read a frame file; valuation lines, if any, are ignored."""
    n, R, S, _, closures = parse_frame_text(text)
    return _close_and_validate(n, R, S, closures)


def load_model(text: str) -> VeltmanModel:
    n, R, S, valuation, closures = parse_frame_text(text)
    frame = _close_and_validate(n, R, S, closures)
    return VeltmanModel(frame, {k: frozenset(v) for k, v in valuation.items()})


def format_pairs(pairs: Iterable[Pair]) -> str:
    return "; ".join(f"{a} {b}" for a, b in sorted(pairs))


def format_frame(frame: VeltmanFrame, valuation: Mapping[str, Iterable[int]] | None = None,
                 comments: Iterable[str] = ()) -> str:
    """Write a frame (and optional valuation) with every pair explicit."""
    lines = [f"# {c}" for c in comments]
    lines.append(f"worlds: {frame.n}")
    lines.append(f"R: {format_pairs(frame.R)}".rstrip())
    for x in range(frame.n):
        if frame.S[x]:
            lines.append(f"S {x}: {format_pairs(frame.S[x])}")
    for name in sorted(valuation or {}):
        worlds = " ".join(str(w) for w in sorted(valuation[name]))
        lines.append(f"val {name}: {worlds}".rstrip())
    return "\n".join(lines) + "\n"


def format_model(model: VeltmanModel, comments: Iterable[str] = ()) -> str:
    return format_frame(model.frame, model.valuation, comments)


# -- forcing --------------------------------------------------------------------

def truth_set(model: VeltmanModel, f: Formula, memo: dict | None = None) -> frozenset[int]:
    """The set of worlds forcing ``f``."""
    memo = {} if memo is None else memo
    if f in memo:
        return memo[f]
    fr = model.frame
    everything = frozenset(fr.worlds)
    if isinstance(f, Var):
        out = model.true_at(f.name)
    elif isinstance(f, Bot):
        out = frozenset()
    elif isinstance(f, Not):
        out = everything - truth_set(model, f.arg, memo)
    elif isinstance(f, And):
        out = truth_set(model, f.left, memo) & truth_set(model, f.right, memo)
    elif isinstance(f, Or):
        out = truth_set(model, f.left, memo) | truth_set(model, f.right, memo)
    elif isinstance(f, Imp):
        out = (everything - truth_set(model, f.left, memo)) | truth_set(model, f.right, memo)
    elif isinstance(f, Box):
        a = truth_set(model, f.arg, memo)
        out = frozenset(w for w in fr.worlds if fr.up[w] <= a)
    elif isinstance(f, Rhd):
        a = truth_set(model, f.left, memo)
        b = truth_set(model, f.right, memo)
        out = frozenset(
            w for w in fr.worlds
            if all(fr.s_succ(w, u) & b for u in fr.up[w] & a)
        )
    else:
        raise TypeError(f"not a formula: {f!r}")
    memo[f] = out
    return out


def forces(model: VeltmanModel, w: int, f: Formula | str) -> bool:
    if isinstance(f, str):
        f = parse_formula(f)
    if not 0 <= w < model.frame.n:
        raise ValueError(f"world {w} out of range 0..{model.frame.n - 1}")
    return w in truth_set(model, f)


# -- frame conditions -----------------------------------------------------------

CONDITIONS = ("M", "M0", "P", "W", "R")


def parse_condition(text: str) -> tuple[str, int | None]:
    """``"M"``, ``"M0"``, ``"P"``, ``"W"``, ``"R"``, ``"CB"`` or ``"C:<i>"``."""
    text = text.strip()
    if text in CONDITIONS or text == "CB":
        return text, None
    m = re.fullmatch(r"C:?(\d+)", text)
    if m:
        return "C", int(m.group(1))
    raise ValueError(f"unknown frame condition {text!r}")


def _first(gen):
    return next(gen, None)


def _check_m(fr: VeltmanFrame):
    # xRy S_x z R u  =>  yRu
    return _first(
        (x, y, z, u)
        for x in fr.worlds for y in sorted(fr.up[x])
        for z in sorted(fr.s_succ(x, y)) for u in sorted(fr.up[z])
        if u not in fr.up[y]
    )


def _check_m0(fr: VeltmanFrame):
    # xRyRz S_x u R v  =>  yRv
    return _first(
        (x, y, z, u, v)
        for x in fr.worlds for y in sorted(fr.up[x]) for z in sorted(fr.up[y])
        for u in sorted(fr.s_succ(x, z)) for v in sorted(fr.up[u])
        if v not in fr.up[y]
    )


def _check_p(fr: VeltmanFrame):
    # xRyRz S_x u  =>  yRu and z S_y u
    return _first(
        (x, y, z, u)
        for x in fr.worlds for y in sorted(fr.up[x]) for z in sorted(fr.up[y])
        for u in sorted(fr.s_succ(x, z))
        if u not in fr.up[y] or (z, u) not in fr.S[y]
    )


def _check_r(fr: VeltmanFrame):
    # xRyRz S_x u R v  =>  z S_y v
    return _first(
        (x, y, z, u, v)
        for x in fr.worlds for y in sorted(fr.up[x]) for z in sorted(fr.up[y])
        for u in sorted(fr.s_succ(x, z)) for v in sorted(fr.up[u])
        if (z, v) not in fr.S[y]
    )


def _check_w(fr: VeltmanFrame):
    # for each w the composite S_w;R must be conversely well-founded
    for w in fr.worlds:
        def composite(a, w=w):
            return {c for b in fr.s_succ(w, a) for c in fr.up[b]}

        cycle = find_cycle(fr.n, composite)
        if cycle:
            # interleave an S_w-step target between consecutive composite steps
            path = [cycle[0]]
            for a, c in zip(cycle, cycle[1:]):
                b = min(b for b in fr.s_succ(w, a) if c in fr.up[b])
                path += [b, c]
            return (w, tuple(path))
    return None


_CHECKERS = {"M": _check_m, "M0": _check_m0, "P": _check_p, "R": _check_r, "W": _check_w}


def check_condition(frame: VeltmanFrame, condition: str) -> tuple[bool, tuple | None]:
    """Decide a frame condition; returns ``(holds, witness)``.

    Witnesses: the offending tuple ``(x, y, ...)`` in the order the condition
    names its worlds; for W a pair ``(w, path)`` with ``path`` alternating
    S_w and R steps, e.g. ``(0, (2, 1, 2))`` for ``2 S_0 1 R 2``.
    """
    name, level = parse_condition(condition)
    if name == "C":
        from .simulation import check_ci
        return check_ci(frame, level)
    if name == "CB":
        from .simulation import check_cb
        return check_cb(frame)
    witness = _CHECKERS[name](frame)
    return witness is None, witness
