import random
from dataclasses import replace
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

import legendrian_surgery.classify as engine
from conftest import FIXTURES
from legendrian_surgery.classify import (
    RULE_ORDER,
    ExcludedCase,
    InternalInconsistency,
    Level,
    Report,
    RuleResult,
    check_cor2,
    classify,
    rule_cor0,
    rule_cor2,
    rule_fig3,
    rule_loose,
    rule_main1,
    rule_main2,
    rule_main3_1,
    rule_main3_2,
    rule_pro0,
    rule_prop_tb,
    rule_stein,
)
from legendrian_surgery.invariants import ClassicalData
from legendrian_surgery.knots import KnotRecord, default_knot_table
from legendrian_surgery.presentation import load_presentation
from legendrian_surgery.surgery import (
    Annotations,
    Declared,
    InconsistentDataError,
    IsolatedSummand,
    SurgeryPresentation,
    dual_invariants,
    dual_order,
    stabilize,
)

TABLE = default_knot_table()
TREFOIL = KnotRecord("right-trefoil", F(1), 1, True)
FIG8 = KnotRecord("figure-eight", F(0), 1, False)
rationals = st.fractions(min_value=-30, max_value=30, max_denominator=8)


def fixture(name):
    return load_presentation(FIXTURES / f"{name}.pres").presentation


def pres(tb, rot, lk=None, signs=None, distinguished=None, declared=None, **kw):
    data = ClassicalData.from_values(tb, rot, lk)
    return SurgeryPresentation(data, signs or {}, distinguished, declared or {}, **kw)


# -- individual rules -------------------------------------------------------------


def test_stein():
    all_minus = pres({"A": -1, "B": -2}, {"A": 0, "B": 1}, signs={"A": -1, "B": -1})
    assert rule_stein(all_minus).level is Level.NONVANISHING_C
    assert rule_stein(fixture("fig6")) is None
    empty = pres({"K": -1}, {"K": 0}, distinguished="K")
    assert rule_stein(empty) is not None


def test_main1():
    assert rule_main1(-3, 0, 0).level is Level.C_VANISHES
    assert rule_main1(0, -1, 1) is None
    assert rule_main1(-2, 1, 0) is None         # boundary: -1 = 2*0 - 1


@given(rationals, rationals, rationals)
def test_main1_strict(tb, rot, tau_star):
    boundary = 2 * tau_star - 1 - abs(rot)
    assert rule_main1(boundary, rot, tau_star) is None
    assert rule_main1(boundary - F(1, 97), rot, tau_star) is not None


def _summand(tb, rot, tau, minus_tb=-1, lk=0):
    return pres({"A": -5, "B": minus_tb}, {"A": 0, "B": 0}, {("A", "B"): lk},
                signs={"A": 1, "B": -1},
                annotations=Annotations(isolated_summand=IsolatedSummand("A", F(tb), F(rot), F(tau))))


def test_pro0():
    assert rule_pro0(_summand(-3, 0, 0)).level is Level.C_VANISHES
    assert rule_pro0(_summand(-1, 0, 0)) is None
    r = engine.check_pro0(_summand(-3, 0, 0, minus_tb=1))
    assert not r.fired and r.hypotheses["det_minus_sublink"] == 0
    assert any("QHS3" in n for n in r.notes)
    assert rule_pro0(pres({"A": -1}, {"A": 0}, signs={"A": 1})) is None


def _fig3(tb1, rot1, tau1, tb2):
    return pres({"L1": tb1, "L2": tb2}, {"L1": rot1, "L2": 0}, {("L1", "L2"): 1},
                signs={"L1": 1, "L2": -1}, declared={"L1": Declared(tau=F(tau1))},
                annotations=Annotations(fig3_configuration=("L1", "L2")))


def test_fig3():
    v = rule_fig3(fixture("fig4"))
    assert v.level is Level.C_VANISHES
    assert (v.hypotheses["tb"], v.hypotheses["rot"], v.hypotheses["tau"]) == (-3, 0, 0)
    assert rule_fig3(_fig3(-3, 0, 0, 1)) is None
    assert rule_fig3(_fig3(1, 0, 1, -1)) is None
    assert rule_fig3(_fig3(-3, 0, 0, -7)) is not None


def test_fig3_needs_signs_and_tau():
    p = _fig3(-3, 0, 0, -1)
    assert rule_fig3(replace(p, signs={"L1": 1, "L2": 1})) is None
    assert rule_fig3(replace(p, declared={})) is None


def test_prop_tb():
    assert rule_prop_tb(-7, True).level is Level.C_PLUS_VANISHES
    assert rule_prop_tb(-1, True) is None
    assert rule_prop_tb(-7, False) is None


def test_cor0():
    assert rule_cor0(1, 4, TREFOIL).level is Level.C_PLUS_VANISHES
    assert rule_cor0(1, 2, TREFOIL) is None
    assert rule_cor0(1, 4, FIG8) is None


def test_main3_1():
    assert rule_main3_1(-6, 1, -3, 1).level is Level.OVERTWISTED
    assert rule_main3_1(-6, -1, -3, 1) is not None
    assert rule_main3_1(F(-1, 2), 0, -3, 1) is None
    assert rule_main3_1(-6, 0, -7, 1) is None
    assert rule_main3_1(-1, 5, 1, 1) is None     # tb = -1 is not < -1


def test_main3_2():
    assert rule_main3_2(-6, 1, -3, 1) is None
    v = rule_main3_2(-8, 1, -3, 1)
    assert v.level is Level.OVERTWISTED and v.scope == "any positive contact surgery"
    assert rule_main3_2(0, 0, 1, 1) is None


@given(st.integers(-12, 3), st.integers(-8, 8), st.integers(0, 4))
def test_cor2_unknot_partner_reduction(tb1, rot1, g1):
    fired = rule_cor2(tb1, rot1, -1, 0, g1, 0) is not None
    assert fired == (tb1 <= -2 and abs(rot1) > tb1 + 2 * g1)


def test_cor2_boundary_and_exclusion():
    # |rot| equal to the bound is silent
    assert rule_cor2(-2, 0, -1, 0, 1, 0) is None
    assert rule_cor2(-2, 1, -1, 0, 1, 0) is not None
    assert rule_cor2(F(-3, 2), 5, -1, 0, 0, 0) is None     # tb_q = -1 exactly
    with pytest.raises(ExcludedCase):
        check_cor2(-6, 1, 1, 0, 1, 0)


def _fig2(signs):
    return pres({"L1": -1, "L2": -1}, {"L1": 0, "L2": 0}, signs=signs,
                annotations=Annotations(fig2_configuration=("L1", "L2")))


def test_main2():
    v = rule_main2(_fig2({"L1": 1, "L2": 1}))
    assert v.level is Level.OVERTWISTED
    assert v.hypotheses["framing_gap"] == 0
    assert rule_main2(_fig2({"L1": 1, "L2": -1})) is None
    assert rule_main2(pres({"L1": -1, "L2": -1}, {"L1": 0, "L2": 0}, signs={"L1": 1, "L2": 1})) is None


def test_loose():
    assert rule_loose(-1, 0, 1, 1) is None
    assert rule_loose(0, 2, -1, 1) is not None
    assert rule_loose(0, 1, -1, 1) is None      # equality is silent


@given(rationals, rationals, st.integers(-9, 1), st.integers(1, 6))
def test_loose_tracks_main3_1_via_dual(tb, rot, chi, q):
    """Stabilized dual knot is loose exactly when main3_1 fires (tb < -1)."""
    if not tb < -1:
        return
    dtb, drot = dual_invariants(tb, rot)
    value = q * abs(tb + 1)
    if value.denominator != 1:
        return
    dq = dual_order(q, tb)
    k = int(dtb) + 1
    stb, srot = stabilize(dtb, drot, 1 if drot >= 0 else -1, k)
    assert (rule_loose(stb, srot, chi, dq) is not None) == (rule_main3_1(tb, rot, chi, q) is not None)


# -- orchestration -----------------------------------------------------------------


@pytest.mark.parametrize("name, level, rule", [
    ("fig3", Level.INCONCLUSIVE, None),
    ("fig4", Level.C_VANISHES, "rule_fig3"),
    ("fig6", Level.C_PLUS_VANISHES, "rule_cor0"),
    ("fig7", Level.OVERTWISTED, "rule_cor2"),
    ("fig8", Level.OVERTWISTED, "rule_main3_1"),
    ("stein", Level.NONVANISHING_C, "rule_stein"),
])
def test_fixture_verdicts(name, level, rule):
    report = classify(fixture(name), TABLE)
    assert (report.verdict.level, report.verdict.rule) == (level, rule)


def test_fig6_pipeline():
    report = classify(fixture("fig6"), TABLE)
    assert report.derived["tb_q"] == -7
    assert report.rule("rule_prop_tb").fired
    h = report.verdict.hypotheses
    assert (h["l"], h["genus2"], h["tb1"], h["l_squared"], h["bound"]) == (4, 1, 1, 16, 4)


def test_fig8_dual_pipeline():
    report = classify(fixture("fig8"), TABLE)
    d = report.derived
    assert (d["dual_tb"], d["dual_rot"], d["dual_order"]) == (F(6, 5), F(-1, 5), 5)
    assert d["dual_stabilized_loose"] is True


def test_fig3_values_and_silence():
    report = classify(fixture("fig3"), TABLE)
    assert (report.derived["tb_q"], report.derived["rot_q"]) == (0, -1)
    assert report.fired == []


def test_every_rule_reported_once():
    for name in ("fig3", "fig4", "fig6", "fig7", "fig8", "stein"):
        report = classify(fixture(name), TABLE)
        assert [r.rule for r in report.rules] == list(RULE_ORDER)


def test_fig4_with_genera_reaches_overtwisted():
    p = fixture("fig4")
    more = replace(p, declared={"L1": Declared(tau=F(0), genus=1), "L2": Declared(genus=0)})
    report = classify(more, TABLE)
    assert report.verdict.level is Level.OVERTWISTED
    assert report.verdict.rule == "rule_cor2"


def _add_declarations(p, rng):
    declared = dict(p.declared)
    for name in p.data.names:
        d = declared.get(name, Declared())
        if d.knot is None and d.genus is None and rng.random() < 0.5:
            d = replace(d, genus=rng.randint(0, 3))
        if d.knot is None and d.tau is None and rng.random() < 0.5:
            d = replace(d, tau=F(rng.randint(-2, 2)))
        if name == p.distinguished and d.tau_star is None and rng.random() < 0.5:
            d = replace(d, tau_star=F(rng.randint(-2, 2)))
        declared[name] = d
    return replace(p, declared=declared)


@pytest.mark.parametrize("seed", range(40))
def test_monotonicity(seed):
    rng = random.Random(seed)
    for name in ("fig3", "fig4", "fig6", "fig7", "fig8", "stein"):
        p = fixture(name)
        before = classify(p, TABLE).verdict.level.rank
        after = classify(_add_declarations(p, rng), TABLE).verdict.level.rank
        assert after >= before


@pytest.mark.parametrize("name", ["fig3", "fig4", "fig6", "fig7", "fig8", "stein"])
def test_rule_independence(name):
    p = fixture(name)
    full = {r.rule: r for r in classify(p, TABLE).rules}
    for skip in RULE_ORDER:
        partial = classify(p, TABLE, disabled=[skip]).rules
        assert skip not in [r.rule for r in partial]
        for r in partial:
            assert r == full[r.rule]


@pytest.mark.parametrize("name", ["fig3", "fig4", "fig6", "fig7", "fig8", "stein"])
def test_determinism_and_round_trip(name):
    a = classify(fixture(name), TABLE).to_json()
    b = classify(fixture(name), TABLE).to_json()
    assert a == b
    back = Report.from_json(a)
    report = classify(fixture(name), TABLE)
    assert back.verdict == report.verdict
    assert back.to_json() == a
    for x, y in zip(back.rules, report.rules):
        assert x.hypotheses == y.hypotheses


def test_consistency_guard(monkeypatch):
    def always(p):
        return RuleResult("rule_fig3", "fired", Level.C_VANISHES, {"forced": True})
    monkeypatch.setattr(engine, "check_fig3", always)
    with pytest.raises(InternalInconsistency) as info:
        classify(fixture("stein"), TABLE)
    assert {r.rule for r in info.value.results} == {"rule_stein", "rule_fig3"}


def test_declared_values_checked_against_computed():
    p = fixture("fig8")
    bad = replace(p, declared={"L1": Declared(tb_q=F(-5))})
    with pytest.raises(InconsistentDataError):
        classify(bad, TABLE)
    bad = replace(p, declared={"L1": Declared(order_q=3)})
    with pytest.raises(InconsistentDataError):
        classify(bad, TABLE)


def test_table_consistency():
    p = fixture("fig6")
    with pytest.raises(InconsistentDataError):
        classify(replace(p, declared={"L2": Declared(knot="no-such-knot")}), TABLE)
    with pytest.raises(InconsistentDataError):       # tb = 1 exceeds the max of -6
        classify(replace(p, declared={"L2": Declared(knot="left-trefoil")}), TABLE)


def test_not_qhs3_is_reported():
    p = pres({"K": -5, "U": -1}, {"K": 0, "U": 0}, {("K", "U"): 1},
             signs={"K": 1, "U": 1}, distinguished="K",
             declared={"K": Declared(tau_star=F(0))})
    report = classify(p, TABLE)
    assert report.derived["is_qhs3"] is False
    assert report.rule("rule_main1").status == "not_applicable"


def test_chi_default_only_when_split():
    linked = pres({"K": -6, "U": -1}, {"K": 1, "U": 0}, {("K", "U"): 1},
                  signs={"K": 1, "U": -1}, distinguished="K",
                  declared={"K": Declared(genus=1)})
    assert classify(linked).derived["chi"] is None
    report = classify(fixture("fig8"), TABLE)
    assert report.derived["chi"] == -3


def test_main1_in_standard_sphere():
    # no other surgeries: tau* is tau and the ambient sphere is a tight L-space
    p = pres({"K": -3}, {"K": 0}, signs={"K": 1}, distinguished="K",
             declared={"K": Declared(knot="figure-eight")})
    report = classify(p, TABLE)
    assert report.rule("rule_main1").fired
    assert report.rule("rule_prop_tb").fired
    assert report.derived["chi"] == -1
    assert report.verdict.level is Level.OVERTWISTED       # -3 - 0 < -1
    assert report.verdict.rule == "rule_main3_1"
