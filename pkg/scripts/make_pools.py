"""Regenerate the shipped instance pools under src/veltman/data/pools."""
import itertools
import pathlib
import sys

from veltman.formula import instantiate, render_formula

VERSION = "1"
OUT = pathlib.Path(__file__).resolve().parents[1] / "src" / "veltman" / "data" / "pools"

B0_BASE = ["[]false", "[]p", "~[]p", "<>p"]
BS1_PQ = ["[]p", "[]q", "<>p", "<>q", "~[]p", "[]false", "<>p & <>q", "<>p | []q"]
PROP2 = ["p", "q", "~p", "p & q", "p | q", "true"]
PROP3 = ["p", "q", "r", "~p", "p & q"]


def b0_slots():
    combos = list(B0_BASE)
    for x, y in itertools.combinations(B0_BASE, 2):
        combos += [f"({x}) & ({y})", f"({x}) | ({y})"]
    for a in combos:
        for b in ("p", "q"):
            for c in ("p", "q"):
                yield {"A": a, "B": b, "C": c}


def pairs(names, values):
    for combo in itertools.product(values, repeat=len(names)):
        yield dict(zip(names, combo))


POOLS = {
    "B0": (b0_slots, "A over []false, []p, ~[]p, <>p and their pairwise & and |; B, C over p, q"),
    "Z": (lambda: pairs("AB", BS1_PQ), "A, B over a fixed list of BS1 formulas in p, q"),
    "W": (lambda: pairs("AB", PROP2), "A, B over propositional formulas in p, q"),
    "M": (lambda: pairs("ABC", PROP3), "A, B, C over propositional formulas in p, q, r"),
    "M0": (lambda: pairs("ABC", PROP3), "A, B, C over propositional formulas in p, q, r"),
    "P": (lambda: pairs("AB", PROP2), "A, B over propositional formulas in p, q"),
    "R": (lambda: pairs("ABC", PROP3), "A, B, C over propositional formulas in p, q, r"),
    "Rstar": (lambda: pairs("ABC", PROP3), "A, B, C over propositional formulas in p, q, r"),
}


def main(argv):
    for schema_id in argv or POOLS:
        gen, note = POOLS[schema_id]
        lines = [f"# pool {schema_id}", f"# version: {VERSION}", f"# {note}"]
        lines += [render_formula(instantiate(schema_id, slots)) for slots in gen()]
        (OUT / f"{schema_id}.txt").write_text("\n".join(lines) + "\n")
        print(f"{schema_id}: {len(lines) - 3} instances")


if __name__ == "__main__":
    main(sys.argv[1:])
