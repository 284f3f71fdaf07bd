"""Text form of derivations.

    enable: B0
    hyp: p
    1 HYP p
    2 TAUT p -> p | q
    3 MP 1 2

Lines starting with ``#`` followed by a space (or alone) are comments.
"""
from __future__ import annotations

import re

from ..formula import ParseError, parse_formula, render_formula
from .kernel import MP, Ax, Derivation, Hyp, Nec, ProofError, Taut

_STEP = re.compile(r"(\d+)\s+(TAUT|AX|HYP|MP|NEC)\b\s*(.*)$")


def _is_comment(line: str) -> bool:
    return line == "#" or line.startswith("# ") or line.startswith("#\t")


def parse_script(text: str) -> Derivation:
    steps, hyps, enabled = [], [], set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or _is_comment(line):
            continue
        try:
            if line.startswith("enable:"):
                enabled.update(x for x in re.split(r"[\s,]+", line[7:].strip()) if x)
                continue
            if line.startswith("hyp:"):
                hyps.append(parse_formula(line[4:]))
                continue
            m = _STEP.match(line)
            if not m:
                raise ProofError(f"line {lineno}: cannot read {line!r}")
            n, kind, rest = int(m.group(1)), m.group(2), m.group(3).strip()
            if n != len(steps) + 1:
                raise ProofError(f"line {lineno}: expected step {len(steps) + 1}, found {n}")
            if kind == "TAUT":
                steps.append(Taut(parse_formula(rest)))
            elif kind == "HYP":
                steps.append(Hyp(parse_formula(rest)))
            elif kind == "AX":
                schema, _, body = rest.partition(" ")
                steps.append(Ax(schema, parse_formula(body)))
            elif kind == "MP":
                i, j = map(int, rest.split())
                steps.append(MP(i, j))
            else:
                steps.append(Nec(int(rest)))
        except ParseError as exc:
            raise ProofError(f"line {lineno}: {exc}") from None
        except ValueError as exc:
            if isinstance(exc, ProofError):
                raise
            raise ProofError(f"line {lineno}: bad step arguments {line!r}") from None
    return Derivation(tuple(steps), tuple(hyps), frozenset(enabled))


def format_script(d: Derivation) -> str:
    lines = []
    if d.enabled:
        lines.append("enable: " + ", ".join(sorted(d.enabled)))
    lines += [f"hyp: {render_formula(h)}" for h in d.hypotheses]
    for n, step in enumerate(d.steps, start=1):
        if isinstance(step, Taut):
            lines.append(f"{n} TAUT {render_formula(step.formula)}")
        elif isinstance(step, Ax):
            lines.append(f"{n} AX {step.schema} {render_formula(step.formula)}")
        elif isinstance(step, Hyp):
            lines.append(f"{n} HYP {render_formula(step.formula)}")
        elif isinstance(step, MP):
            lines.append(f"{n} MP {step.premise} {step.implication}")
        else:
            lines.append(f"{n} NEC {step.premise}")
    return "\n".join(lines) + "\n"
