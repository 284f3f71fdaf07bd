"""Command-line entry point.

Exit codes: 0 holds / accepted, 1 fails / refuted (witness on stdout),
2 usage, parse, I/O or resource error.
"""
from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from . import search as srch
from .formula import ParseError, classify, parse_formula, render_formula
from .formula.schemas import SchemaError
from .proofkit import (
    AtomBudgetError, ProofError, ProofRejected, derive_z, format_script, parse_script,
    verify_derivation,
)
from .semantics import (
    FrameError, check_condition, format_frame, format_model, load_frame, load_model,
    parse_condition, truth_set,
)
from .simulation import (
    SimulationError, bis_level, characteristic_formula, check_ci, greatest_b_simulation,
    ci_counterexample,
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None


def _set(ws) -> str:
    return "{" + ", ".join(map(str, sorted(ws))) + "}"


def witness_lines(condition: str, witness) -> list[str]:
    """A failing condition's witness written as frame-file pairs."""
    name, _ = parse_condition(condition)
    if name == "W":
        w, path = witness
        lines = []
        for k, (a, b) in enumerate(zip(path, path[1:])):
            lines.append(f"S {w}: {a} {b}" if k % 2 == 0 else f"R: {a} {b}")
        return lines
    if name in ("C", "CB"):
        a, b = witness
        return [f"R: {a} {b}"]
    if name == "M":
        x, y, z, u = witness
        return [f"R: {x} {y}", f"S {x}: {y} {z}", f"R: {z} {u}", f"# missing R: {y} {u}"]
    if name == "P":
        x, y, z, u = witness
        return [f"R: {x} {y}; {y} {z}", f"S {x}: {z} {u}",
                f"# missing R: {y} {u} or S {y}: {z} {u}"]
    x, y, z, u, v = witness
    missing = f"# missing R: {y} {v}" if name == "M0" else f"# missing S {y}: {z} {v}"
    return [f"R: {x} {y}; {y} {z}", f"S {x}: {z} {u}", f"R: {u} {v}", missing]


# -- subcommands ------------------------------------------------------------------

def cmd_parse(args):
    print(render_formula(parse_formula(args.formula)))
    return 0


def cmd_classify(args):
    for line in classify(parse_formula(args.formula)).lines():
        print(line)
    return 0


def cmd_check_model(args):
    model = load_model(_read(args.file))
    f = parse_formula(args.formula)
    forced = truth_set(model, f)
    if args.world is not None:
        if not 0 <= args.world < model.frame.n:
            raise UsageError(f"world {args.world} out of range 0..{model.frame.n - 1}")
        ok = args.world in forced
        print(f"world {args.world} {'forces' if ok else 'does not force'} {render_formula(f)}")
        return 0 if ok else 1
    print(f"forced at {_set(forced)}")
    refuted = set(model.frame.worlds) - forced
    if refuted:
        print(f"refuted at {_set(refuted)}")
        return 1
    return 0


def cmd_check_frame(args):
    frame = load_frame(_read(args.file))
    status = 0
    for cond in args.condition:
        holds, witness = check_condition(frame, cond)
        print(f"{cond}: {'holds' if holds else 'fails'}")
        if not holds:
            status = 1
            print(f"witness {witness}")
            for line in witness_lines(cond, witness):
                print(line)
    return status


def cmd_bis(args):
    frame = load_frame(_read(args.file))
    rel = greatest_b_simulation(frame) if args.fix else bis_level(frame, args.level)
    label = "fixpoint" if args.fix else f"level {args.level}"
    print(f"# bis {label}")
    print("pairs: " + "; ".join(f"{a} {b}" for a, b in sorted(rel.pairs)))
    return 0


def cmd_charform(args):
    model = load_model(_read(args.file))
    frame = model.frame
    if not 0 <= args.node < frame.n:
        raise UsageError(f"node {args.node} out of range 0..{frame.n - 1}")
    char = characteristic_formula(frame, args.node, args.level)
    forced = truth_set(char.model(frame), char.formula)
    text = format_frame(frame, char.valuation, comments=[
        f"characteristic formula of node {args.node} at level {args.level}",
        f"formula: {render_formula(char.formula)}",
        f"forced at {_set(forced)}; bis row {_set(bis_level(frame, args.level).row(args.node))}",
    ])
    if args.output:
        Path(args.output).write_text(text)
    print(f"formula: {render_formula(char.formula)}")
    print(f"forced at {_set(forced)}")
    if not args.output:
        print(text, end="")
    return 0


def cmd_counterexample(args):
    frame = load_frame(_read(args.file))
    if args.pair:
        pair = tuple(args.pair)
    else:
        holds, pair = check_ci(frame, args.level)
        if holds:
            print(f"C{args.level} holds; no counterexample")
            return 0
    ce = ci_counterexample(frame, args.level, pair)
    text = format_model(ce.model, comments=[
        f"C{args.level} fails at {pair}",
        f"antecedent: {render_formula(ce.antecedent)}",
        f"consequent: {render_formula(ce.consequent)}",
        f"world {ce.world} forces the antecedent and refutes the consequent",
    ])
    if args.output:
        Path(args.output).write_text(text)
    print(f"instance: {render_formula(ce.instance)}")
    print(f"world: {ce.world}")
    print(text, end="")
    return 1


def cmd_prove_z(args):
    d = derive_z(parse_formula(args.a), parse_formula(args.b))
    conclusion = verify_derivation(d)
    text = format_script(d)
    if args.output:
        Path(args.output).write_text(text)
        print(f"{len(d)} steps written to {args.output}")
    else:
        print(text, end="")
    print(f"# conclusion: {render_formula(conclusion)}")
    return 0


def cmd_verify(args):
    d = parse_script(_read(args.file))
    try:
        conclusion = verify_derivation(d)
    except ProofRejected as exc:
        print(f"rejected at step {exc.step}: {exc.reason}")
        return 1
    print(f"accepted: {render_formula(conclusion)}")
    return 0


def cmd_search(args):
    report = srch.search_schema(args.schema, args.max_worlds, args.require)
    for line in report.lines():
        print(line)
    if report.found:
        print(report.model_text(), end="")
        return 1
    return 0


def write_report(out: Path, claims) -> list[str]:
    from .plotting import draw_frame

    out.mkdir(parents=True, exist_ok=True)
    lines, rows = [], []
    for c in claims:
        status = "PASS" if c.passed else "FAIL"
        witness = "-"
        if c.frame is not None:
            vf = out / f"{c.slug}.vf"
            vf.write_text(c.witness_text())
            draw_frame(c.frame, out / f"{c.slug}.png", c.valuation, title=c.claim,
                       highlight=() if c.world is None else (c.world,))
            witness = str(vf)
        lines.append(f"{c.claim}: {status} {witness}")
        rows.append([c.claim, status, witness, " | ".join(c.notes)])
    with open(out / "report.tsv", "w", newline="") as fh:
        w = csv.writer(fh, delimiter="\t", lineterminator="\n")
        w.writerow(["claim", "status", "witness", "notes"])
        w.writerows(rows)
    return lines


def cmd_fixtures(args):
    if args.verify:
        claims = srch.independence_report()
        for line in write_report(Path(args.out), claims):
            print(line)
        return 0 if all(c.passed for c in claims) else 1
    if args.id is None:
        for fid in srch.FIXTURE_IDS:
            print(fid)
        return 0
    print(srch.fixture_text(args.id), end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="veltman", description="Interpretability logic toolkit: formulas, Veltman frames, proofs.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("parse", help="parse and re-render a formula")
    s.add_argument("formula")
    s.set_defaults(func=cmd_parse)

    s = sub.add_parser("classify", help="syntactic classes of a formula")
    s.add_argument("formula")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("check-model", help="forcing of a formula in a model file")
    s.add_argument("file")
    s.add_argument("--formula", "-f", required=True)
    s.add_argument("--world", "-w", type=int)
    s.set_defaults(func=cmd_check_model)

    s = sub.add_parser("check-frame", help="frame conditions M, M0, P, W, R, C:<i>, CB")
    s.add_argument("file")
    s.add_argument("--condition", "-c", action="append", required=True)
    s.set_defaults(func=cmd_check_frame)

    s = sub.add_parser("bis", help="bis relation at a level, or the largest B-simulation")
    s.add_argument("file")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--level", type=int)
    g.add_argument("--fix", action="store_true")
    s.set_defaults(func=cmd_bis)

    s = sub.add_parser("charform", help="characteristic formula of a node")
    s.add_argument("file")
    s.add_argument("--node", type=int, required=True)
    s.add_argument("--level", type=int, required=True)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_charform)

    s = sub.add_parser("counterexample", help="refute a B_i instance where C_i fails")
    s.add_argument("file")
    s.add_argument("--level", type=int, default=0)
    s.add_argument("--pair", type=int, nargs=2, metavar=("A", "B"))
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_counterexample)

    s = sub.add_parser("prove-z", help="derive Z for two BS1 formulas from B0")
    s.add_argument("--a", required=True)
    s.add_argument("--b", required=True)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_prove_z)

    s = sub.add_parser("verify", help="check a proof script")
    s.add_argument("file")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("search", help="bounded countermodel search over a shipped pool")
    s.add_argument("--schema", required=True, choices=srch.POOL_IDS)
    s.add_argument("--max-worlds", type=int, required=True)
    s.add_argument("--require")
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("fixtures", help="print a bundled fixture, or run the independence report")
    s.add_argument("id", nargs="?", choices=srch.FIXTURE_IDS)
    s.add_argument("--verify", action="store_true")
    s.add_argument("--out", default="fixtures-report")
    s.set_defaults(func=cmd_fixtures)
    return p


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 2
    except (ParseError, FrameError, SchemaError, ProofError, AtomBudgetError, SimulationError,
            srch.SearchError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
