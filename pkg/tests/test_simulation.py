import pytest

from veltman.formula import classify, parse_formula
from veltman.semantics import VeltmanFrame, close_s, forces, load_frame, truth_set
from veltman.simulation import (
    SimulationError, bis_level, bis_levels, characteristic_formula, check_cb, check_ci, depth,
    frame_depth, greatest_b_simulation, is_b_simulation, ci_counterexample, stabilization_round,
)

ONE = load_frame("worlds: 1\n")


def b_not_w_without_yz(frame):
    # drop y S_w z (and the transitive x S_w z) from the fixture
    S0 = frame.S[0] - {(2, 3), (1, 3)}
    return close_s(VeltmanFrame(frame.n, frame.R, (S0,) + frame.S[1:]))


def test_one_world():
    assert bis_level(ONE, 3).pairs == {(0, 0)}
    assert greatest_b_simulation(ONE).pairs == {(0, 0)}


def test_endpoints_related_at_every_level(b_not_w):
    for n in range(4):
        rel = bis_level(b_not_w.frame, n)
        assert (2, 3) in rel and (3, 2) in rel


def test_zambella_level0(zambella):
    assert (1, 2) not in bis_level(zambella.frame, 0)


def test_b_not_w_fixpoint(b_not_w):
    fr = b_not_w.frame
    fix = greatest_b_simulation(fr)
    assert {(w, w) for w in fr.worlds} | {(2, 3), (3, 2)} <= fix.pairs
    assert fix.pairs <= bis_level(fr, 0).pairs
    assert stabilization_round(fr) <= 2


def test_b_w_not_r_fixpoint_relates_endpoints(b_w_not_r):
    fix = greatest_b_simulation(b_w_not_r.frame)
    ends = [w for w in b_w_not_r.frame.worlds if not b_w_not_r.frame.up[w]]
    assert ends == [2, 3, 5]
    assert {(a, b) for a in ends for b in ends} <= fix.pairs


def test_depths(zambella):
    chain = load_frame("worlds: 3\nclose: r-transitive, s-mandatory\nR: 0 1; 1 2\n")
    assert depth(chain, 2) == 0 and depth(chain, 0) == 2
    assert depth(zambella.frame, 0) == 2 and frame_depth(zambella.frame) == 2


def test_fixpoint_is_b_simulation(frames4):
    for fr in frames4:
        assert is_b_simulation(fr, greatest_b_simulation(fr).pairs)


def test_levels_shrink(frames3):
    for fr in frames3:
        levels = bis_levels(fr, 3)
        for a, b in zip(levels, levels[1:]):
            assert b.pairs <= a.pairs


# -- C_i and C_B ---------------------------------------------------------------

def test_ci_fixtures(zambella, b_not_w, b_w_not_r):
    assert check_ci(b_w_not_r.frame, 0) == (True, None)
    assert check_ci(b_not_w.frame, 0) == (True, None)
    assert check_ci(zambella.frame, 0) == (False, (0, 1))


def test_cb_fixtures(zambella, b_not_w, b_w_not_r):
    assert check_cb(b_not_w.frame) == (True, None)
    assert check_cb(b_w_not_r.frame) == (True, None)
    assert check_cb(zambella.frame) == (False, (0, 1))


def test_ci_fails_without_yz(b_not_w):
    fr = b_not_w_without_yz(b_not_w.frame)
    assert check_ci(fr, 0) == (False, (0, 2))


def test_cb_d_variant_diverges_on_fixtures(b_not_w, b_w_not_r):
    # the "yRd" reading rejects both frames that the e-form accepts
    assert not check_cb(b_not_w.frame, "d")[0]
    assert not check_cb(b_w_not_r.frame, "d")[0]
    with pytest.raises(ValueError):
        check_cb(b_not_w.frame, "x")


def test_m_frames_satisfy_every_ci(frames3):
    from veltman.semantics import check_condition
    for fr in frames3:
        if check_condition(fr, "M")[0]:
            assert all(check_ci(fr, i)[0] for i in range(3))


# -- characteristic formulas ---------------------------------------------------

def test_charform_one_world():
    c = characteristic_formula(ONE, 0, 0)
    assert c.formula == parse_formula("[]#r0_0")
    assert c.valuation == {"#r0_0": frozenset()}
    assert truth_set(c.model(ONE), c.formula) == {0}


def test_charform_b_not_w(b_not_w):
    c = characteristic_formula(b_not_w.frame, 2, 0)
    assert truth_set(c.model(b_not_w.frame), c.formula) == {2, 3}


def test_charform_zambella(zambella):
    c = characteristic_formula(zambella.frame, 1, 1)
    assert truth_set(c.model(zambella.frame), c.formula) == {1}
    assert classify(c.formula).es2_level == 1


def test_charform_levels(frames3):
    for fr in frames3:
        for b in fr.worlds:
            for i in range(3):
                c = characteristic_formula(fr, b, i)
                assert classify(c.formula).es2_level <= i
                assert all(name.startswith("#") for name in c.valuation)


def test_charform_range():
    with pytest.raises(SimulationError):
        characteristic_formula(ONE, 3, 0)


# -- counter-valuations where C_i fails ---------------------------------------

def test_counterexample_on_modified_fixture(b_not_w):
    fr = b_not_w_without_yz(b_not_w.frame)
    ce = ci_counterexample(fr, 0, (0, 2))
    assert forces(ce.model, 0, ce.antecedent)
    assert not forces(ce.model, 0, ce.consequent)
    assert ce.world == 0


def test_counterexample_instance_is_b0(frames3):
    from veltman.formula import match_schema
    for fr in frames3:
        holds, pair = check_ci(fr, 0)
        if not holds:
            ce = ci_counterexample(fr, 0, pair)
            slots = match_schema("B0", ce.instance)
            assert classify(slots["A"]).in_bs1


def test_counterexample_precondition(b_w_not_r):
    with pytest.raises(SimulationError):
        ci_counterexample(b_w_not_r.frame, 0, (0, 1))
    with pytest.raises(SimulationError):
        ci_counterexample(b_w_not_r.frame, 0, (1, 0))


# -- ES2^n formulas transfer along bis_n ----------------------------------------

POOL = [parse_formula(t) for t in [
    "[]p", "<>p", "~[]q", "[]p & <>q", "~([]p |> q)", "~(<>p |> ~q)", "<>p | ~([]q |> p)",
    "~(~([]p |> q) |> p)", "[]false", "~(<>p |> q) & []q", "~(<>p & ~(<>q |> p) |> q)",
]]


def test_es2_transfer_along_bis(frames3):
    from veltman.search import ValuationSpace, sweep
    for fr in frames3:
        space = ValuationSpace(fr.n, ("p", "q"))
        levels = bis_levels(fr, 2)
        for A in POOL:
            lvl = classify(A).es2_level
            ext = sweep(fr, A, space)
            for n in range(lvl, 3):
                for b, u in levels[n].pairs:
                    # wherever b forces A, so does u
                    assert ext[b] & ~ext[u] == 0
