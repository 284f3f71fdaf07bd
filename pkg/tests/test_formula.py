import pytest
from hypothesis import given, settings, strategies as st

from veltman.formula import (
    BOT, TOP, And, Box, Imp, Not, Or, ParseError, Rhd, SchemaError, Var, box_set, boxed_basis,
    classify, dnf_disjuncts, es2_level, evaluate, full_dnf, get_schema, in_bs1, in_es2_stage,
    instantiate, match_schema, modal_atoms, parse_formula, render_formula,
)
from veltman.formula.normal import NormalFormError

P = parse_formula
p, q, r = Var("p"), Var("q"), Var("r")


# -- parsing and printing ------------------------------------------------------

def test_precedence_box_then_imp_then_rhd():
    assert P("[]p -> p |> q") == Imp(Box(p), Rhd(p, q))


def test_equiv_expands_to_two_rhd():
    dp, dq = Not(Box(Not(p))), Not(Box(Not(q)))
    assert P("<>p == <>q") == And(Rhd(dp, dq), Rhd(dq, dp))


@pytest.mark.parametrize("text", ["p |> q |> r", "p == q == r", "(p", "p)", "p &", "[]", "p q"])
def test_rejects(text):
    with pytest.raises(ParseError):
        P(text)


def test_parse_error_has_position():
    with pytest.raises(ParseError) as exc:
        P("p & & q")
    assert exc.value.pos == 4


@pytest.mark.parametrize("f, text", [
    (Box(p), "[]p"),
    (Rhd(BOT, BOT), "false |> false"),
    (And(Box(p), Not(Box(q))), "[]p & ~[]q"),
    (TOP, "true"),
])
def test_render(f, text):
    assert render_formula(f) == text


def test_and_binds_tighter_than_or():
    assert P("p | q & r") == Or(p, And(q, r))


def test_imp_right_assoc():
    assert P("p -> q -> r") == Imp(p, Imp(q, r))


def test_iff_expands():
    assert P("p <-> q") == And(Imp(p, q), Imp(q, p))


names = st.sampled_from(["p", "q", "r", "x1"])
formulas = st.recursive(
    st.one_of(names.map(Var), st.just(BOT)),
    lambda sub: st.one_of(
        sub.map(Not), sub.map(Box),
        st.tuples(sub, sub).map(lambda t: And(*t)),
        st.tuples(sub, sub).map(lambda t: Or(*t)),
        st.tuples(sub, sub).map(lambda t: Imp(*t)),
        st.tuples(sub, sub).map(lambda t: Rhd(*t)),
    ),
    max_leaves=12,
)


@given(formulas)
@settings(max_examples=300)
def test_round_trip(f):
    assert P(render_formula(f)) == f


# -- classes -------------------------------------------------------------------

def test_classify_box():
    c = classify(P("[]p"))
    assert (c.in_bs1, c.es2_level, c.in_es3, c.in_es4, c.in_ep2c) == (True, 0, True, True, True)


def test_classify_negated_rhd():
    c = classify(P("~([]p |> q)"))
    assert (c.in_bs1, c.es2_level, c.in_es3, c.in_es4, c.in_ep2c) == (False, 1, False, True, False)
    assert "ES2 level 1" in c.lines()


def test_diamond_is_bs1():
    c = classify(P("<>p"))
    assert c.in_bs1 and c.es2_level == 0


def test_plain_rhd():
    c = classify(P("p |> q"))
    assert (c.in_bs1, c.es2_level, c.in_es3, c.in_ep2c) == (False, None, True, True)


def test_literal_grammar_no_imp():
    assert not in_bs1(P("[]p -> []q"))


def test_stage_two():
    assert es2_level(P("~(~([]p |> q) |> r)")) == 2


@given(formulas)
@settings(max_examples=300)
def test_class_invariants(f):
    c = classify(f)
    assert c.in_bs1 == (c.es2_level == 0)
    if c.es2_level is not None:
        assert c.in_es4
        for j in range(c.es2_level, c.es2_level + 3):
            assert in_es2_stage(f, j)
        if c.es2_level > 0:
            assert not in_es2_stage(f, c.es2_level - 1)
    if c.in_es3:
        assert c.in_es4


# -- basis, DNF, atoms ---------------------------------------------------------

@pytest.mark.parametrize("text, expected", [
    ("[]p | []q", ["[]p", "[]q"]),
    ("[]p & ~[]p", ["[]p"]),
    ("[]([]p -> p)", ["[]([]p -> p)"]),
])
def test_boxed_basis(text, expected):
    assert [render_formula(b) for b in boxed_basis(P(text))] == expected


def test_full_dnf_single():
    assert full_dnf(P("[]p"), [P("[]p")]) == P("[]p")


def test_full_dnf_two_atoms():
    # truth table: rows (+,+), (+,-), (-,+) satisfy []p | []q
    got = full_dnf(P("[]p | []q"), [P("[]p"), P("[]q")])
    assert got == P("([]p&[]q) | ([]p&~[]q) | (~[]p&[]q)")


def test_full_dnf_contradiction():
    assert full_dnf(P("[]p & ~[]p"), [P("[]p")]) == BOT


def test_full_dnf_preconditions():
    with pytest.raises(NormalFormError):
        full_dnf(P("p"), [])
    with pytest.raises(NormalFormError):
        full_dnf(P("[]p | []q"), [P("[]p")])
    with pytest.raises(NormalFormError):
        full_dnf(P("[]p"), [P("[]p"), P("p")])


@pytest.mark.parametrize("text, expected", [
    ("[]p&~[]q", {0}), ("~[]p&~[]q", set()), ("[]p&[]q", {0, 1}),
])
def test_box_set(text, expected):
    assert box_set(P(text), [P("[]p"), P("[]q")]) == expected


def test_box_set_rejects_malformed():
    with pytest.raises(NormalFormError):
        box_set(P("[]p"), [P("[]p"), P("[]q")])


@pytest.mark.parametrize("text, expected", [
    ("[]p -> []p", ["[]p"]),
    ("(p|>q) & ~(p|>q)", ["p |> q"]),
    ("p & []q", ["p", "[]q"]),
])
def test_modal_atoms(text, expected):
    assert [render_formula(a) for a in modal_atoms(P(text))] == expected


boxes = st.sampled_from([P("[]p"), P("[]q"), P("[]r"), P("[](p -> q)"), P("[]false")])
bs1 = st.recursive(
    boxes,
    lambda sub: st.one_of(
        sub.map(Not),
        st.tuples(sub, sub).map(lambda t: And(*t)),
        st.tuples(sub, sub).map(lambda t: Or(*t)),
    ),
    max_leaves=8,
)


@given(bs1)
@settings(max_examples=200)
def test_full_dnf_equivalent(f):
    basis = boxed_basis(f)
    dnf = full_dnf(f, basis)
    for k in range(1 << len(basis)):
        val = {b: bool(k >> i & 1) for i, b in enumerate(basis)}
        assert evaluate(f, val.__getitem__) == evaluate(dnf, val.__getitem__)
    for d in dnf_disjuncts(dnf):
        box_set(d, basis)  # one signed literal per basis element


# -- schemata ------------------------------------------------------------------

def test_instantiate_j5():
    assert render_formula(instantiate("J5", {"A": "p"})) == "<>p |> p"


def test_b0_side_condition():
    with pytest.raises(SchemaError, match="slot A requires ES2\\^0"):
        instantiate("B0", {"A": "p |> q", "B": "p", "C": "q"})


def test_z_instance():
    got = instantiate("Z", {"A": "<>p", "B": "<>q"})
    assert got == P("((<>p |> <>q)&(<>q |> <>p)) -> (<>p |> <>p & <>q)")


def test_z_requires_bs1():
    with pytest.raises(SchemaError):
        instantiate("Z", {"A": "p", "B": "[]q"})


def test_zext_requires_es2_everywhere():
    ok = {"A": "[]p", "A2": "~([]p |> q)", "B": "<>q", "B2": "[]q"}
    instantiate("Zext", ok)
    with pytest.raises(SchemaError):
        instantiate("Zext", {**ok, "B2": "p"})


def test_bprime_requires_box_cnf():
    instantiate("Bprime", {"A": "[]p", "B": "q", "C": "[]r & ([]s | []t)"})
    with pytest.raises(SchemaError):
        instantiate("Bprime", {"A": "[]p", "B": "q", "C": "[]r | ([]s & []t)"})


def test_match_recovers_slots():
    f = instantiate("J2", {"A": "p", "B": "[]q", "C": "r"})
    assert match_schema("J2", f) == {"A": p, "B": P("[]q"), "C": r}
    with pytest.raises(SchemaError):
        match_schema("J5", f)


def test_unknown_schema():
    with pytest.raises(SchemaError):
        get_schema("Q7")


def test_all_schemas_instantiate():
    for sid in ["L1", "L2", "L3", "J1", "J2", "J3", "J4", "J5", "W", "Wstar", "M0", "M", "P",
                "R", "Rstar", "B", "B3", "Bprime", "Z", "Zext"]:
        s = get_schema(sid)
        s.instantiate({slot: Box(Var(slot.lower())) for slot in s.slots})
