"""Rule engine: decide what the surgery criteria say about a presentation.

Every criterion is a rule with a fixed conclusion level.  A rule is checked by
a ``check_*`` function returning a :class:`RuleResult` (fired, silent, or not
applicable, plus the values its hypotheses were evaluated at); the matching
``rule_*`` function returns just the :class:`Verdict` or ``None``.

Levels form a small lattice::

    Overtwisted  =>  CVanishes  =>  CPlusVanishes      NonvanishingC

``NonvanishingC`` (from Stein fillability) contradicts the whole left chain;
deriving both raises :class:`InternalInconsistency`.

All inequalities are strict and evaluated over exact rationals.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .knots import KnotRecord
from .linalg import determinant
from .surgery import (
    Declared,
    HomologyData,
    InconsistentDataError,
    SurgeryPresentation,
    build_matrices,
    dual_invariants,
    dual_order,
    homology,
    main2_witness,
    rational_seifert_euler,
    stabilize,
    surgery_transform,
)

__all__ = [
    "Level",
    "Verdict",
    "RuleResult",
    "Report",
    "ExcludedCase",
    "InternalInconsistency",
    "RULE_ORDER",
    "rule_stein",
    "rule_main1",
    "rule_pro0",
    "rule_fig3",
    "rule_prop_tb",
    "rule_cor0",
    "rule_main3_1",
    "rule_main3_2",
    "rule_cor2",
    "rule_main2",
    "rule_loose",
    "check_stein",
    "check_main1",
    "check_pro0",
    "check_fig3",
    "check_prop_tb",
    "check_cor0",
    "check_main3_1",
    "check_main3_2",
    "check_cor2",
    "check_main2",
    "resolve_declared",
    "classify",
]


class Level(enum.Enum):
    INCONCLUSIVE = "Inconclusive"
    NONVANISHING_C = "NonvanishingC"
    C_PLUS_VANISHES = "CPlusVanishes"
    C_VANISHES = "CVanishes"
    OVERTWISTED = "Overtwisted"

    @property
    def rank(self) -> int:
        """Position in the vanishing chain; NonvanishingC sits off the chain at 0."""
        return _RANK[self]

    @property
    def vanishing(self) -> bool:
        return self.rank > 0


_RANK = {
    Level.INCONCLUSIVE: 0,
    Level.NONVANISHING_C: 0,
    Level.C_PLUS_VANISHES: 1,
    Level.C_VANISHES: 2,
    Level.OVERTWISTED: 3,
}

Value = Fraction | bool


class ExcludedCase(ValueError):
    """The criterion's formula is undefined for these inputs."""


class InternalInconsistency(RuntimeError):
    def __init__(self, message: str, results: Iterable["RuleResult"] = ()):
        self.results = list(results)
        super().__init__(message)


@dataclass(frozen=True)
class Verdict:
    level: Level
    rule: str | None
    hypotheses: Mapping[str, Value] = field(default_factory=dict)
    notes: tuple[str, ...] = ()
    scope: str | None = None


@dataclass(frozen=True)
class RuleResult:
    rule: str
    status: str                     # "fired" | "silent" | "not_applicable"
    level: Level
    hypotheses: Mapping[str, Value] = field(default_factory=dict)
    notes: tuple[str, ...] = ()
    scope: str | None = None

    @property
    def fired(self) -> bool:
        return self.status == "fired"

    @property
    def verdict(self) -> Verdict | None:
        if not self.fired:
            return None
        return Verdict(self.level, self.rule, dict(self.hypotheses), self.notes, self.scope)


def _result(rule, level, fired, hyps, notes=(), scope=None) -> RuleResult:
    return RuleResult(rule, "fired" if fired else "silent", level, hyps, tuple(notes), scope)


def _na(rule, level, reason, hyps=None) -> RuleResult:
    return RuleResult(rule, "not_applicable", level, hyps or {}, (reason,))


F = Fraction


# -- rules on numbers --------------------------------------------------------


def check_main1(tb, rot, tau_star) -> RuleResult:
    tb, rot, tau_star = F(tb), F(rot), F(tau_star)
    lhs, rhs = tb + abs(rot), 2 * tau_star - 1
    return _result("rule_main1", Level.C_VANISHES, lhs < rhs,
                   {"tb_q": tb, "rot_q": rot, "tau_star": tau_star,
                    "tb_plus_abs_rot": lhs, "two_tau_star_minus_1": rhs})


def check_prop_tb(tb_q, ambient_l_space_tight: bool) -> RuleResult:
    tb_q = F(tb_q)
    hyps = {"tb_q": tb_q, "ambient_l_space_tight": bool(ambient_l_space_tight)}
    if not ambient_l_space_tight:
        return _result("rule_prop_tb", Level.C_PLUS_VANISHES, False, hyps,
                       ["ambient is not known to be a tight contact L-space"])
    return _result("rule_prop_tb", Level.C_PLUS_VANISHES, tb_q < -1, hyps)


def check_cor0(tb1, l, rec2: KnotRecord) -> RuleResult:
    tb1, l = F(tb1), F(l)
    lhs = l * l
    rhs = 2 * rec2.genus * (tb1 + 1)
    hyps = {"tb1": tb1, "l": l, "genus2": F(rec2.genus),
            "l_space_knot2": rec2.l_space_knot, "l_squared": lhs, "bound": rhs}
    if not rec2.l_space_knot:
        return _result("rule_cor0", Level.C_PLUS_VANISHES, False, hyps,
                       [f"{rec2.name} is not an L-space knot"])
    return _result("rule_cor0", Level.C_PLUS_VANISHES, lhs > rhs, hyps)


def check_main3_1(tb, rot, chi, q) -> RuleResult:
    tb, rot, chi = F(tb), F(rot), F(chi)
    bound = chi / q
    fired = tb < -1 and tb - abs(rot) < bound
    return _result("rule_main3_1", Level.OVERTWISTED, fired,
                   {"tb_q": tb, "rot_q": rot, "chi": chi, "q": F(q),
                    "tb_minus_abs_rot": tb - abs(rot), "chi_over_q": bound})


def check_main3_2(tb, rot, chi, q) -> RuleResult:
    tb, rot, chi = F(tb), F(rot), F(chi)
    rhs = chi / q - 2
    return _result("rule_main3_2", Level.OVERTWISTED, tb + abs(rot) < rhs,
                   {"tb_q": tb, "rot_q": rot, "chi": chi, "q": F(q),
                    "tb_plus_abs_rot": tb + abs(rot), "chi_over_q_minus_2": rhs},
                   scope="any positive contact surgery")


def check_cor2(tb1, rot1, tb2, rot2, g1: int, g2: int) -> RuleResult:
    tb1, rot1, tb2, rot2 = F(tb1), F(rot1), F(tb2), F(rot2)
    if tb2 == 1:
        raise ExcludedCase("tb(L2) = 1 is excluded")
    shift = 1 / (1 - tb2)
    tb_q = tb1 + shift
    rot_q = rot1 + rot2 * shift
    rhs = 2 * g1 + F(2 * g2 - 1) / abs(1 - tb2) + tb_q
    fired = tb_q < -1 and abs(rot_q) > rhs
    return _result("rule_cor2", Level.OVERTWISTED, fired,
                   {"tb1": tb1, "rot1": rot1, "tb2": tb2, "rot2": rot2,
                    "g1": F(g1), "g2": F(g2), "tb_q": tb_q, "abs_rot_q": abs(rot_q),
                    "rot_bound": rhs})


def rule_loose(tb, rot, chi, q) -> str | None:
    """Note when a knot violates the tight-complement bound, so its complement
    is overtwisted.  This is a statement about the knot complement only."""
    tb, rot, chi = F(tb), F(rot), F(chi)
    lhs, rhs = -abs(tb) + abs(rot), -chi / q
    if lhs > rhs:
        return f"loose: -|tb|+|rot| = {lhs} > -chi/q = {rhs}; complement is overtwisted"
    return None


# -- rules on presentations -----------------------------------------------------


def _sign(p: SurgeryPresentation, name: str) -> int | None:
    return p.signs.get(name)


def check_stein(p: SurgeryPresentation) -> RuleResult:
    plus = [n for n, s in p.signs.items() if s == 1]
    return _result("rule_stein", Level.NONVANISHING_C, not plus,
                   {"plus_components": F(len(plus))},
                   [] if plus else ["only contact (-1)-surgeries: Stein fillable"])


def _minus_sublink_det(p: SurgeryPresentation) -> Fraction:
    d = p.data
    minus = [n for n in d.names if p.signs.get(n) == -1]
    m = [[d.tb[a] - 1 if a == b else d.linking(a, b) for b in minus] for a in minus]
    return determinant(m)


def check_pro0(p: SurgeryPresentation) -> RuleResult:
    rule, level = "rule_pro0", Level.C_VANISHES
    s = p.annotations.isolated_summand
    if s is None:
        return _na(rule, level, "no isolated_summand annotation")
    if _sign(p, s.component) != 1:
        return _na(rule, level, f"{s.component} does not carry contact (+1)-surgery")
    det_minus = _minus_sublink_det(p)
    lhs, rhs = s.tb + abs(s.rot), 2 * s.tau - 1
    hyps = {"tb3": s.tb, "rot3": s.rot, "tau3": s.tau, "det_minus_sublink": det_minus,
            "tb_plus_abs_rot": lhs, "two_tau_minus_1": rhs}
    if det_minus == 0:
        return _result(rule, level, False, hyps,
                       ["(-1)-sublink surgery is not a QHS3 (det = 0)"])
    return _result(rule, level, lhs < rhs, hyps)


def _pair_annotation(p, pair, rule, level, signs):
    """Common gate for two-component configuration rules."""
    if pair is None:
        return None, _na(rule, level, "configuration not annotated")
    l1, l2 = pair
    if set(p.data.names) != {l1, l2} or l1 == l2:
        return None, _na(rule, level, "needs exactly the two annotated components")
    if (_sign(p, l1), _sign(p, l2)) != signs:
        return None, _na(rule, level,
                         f"needs surgery signs {signs[0]:+d} on {l1}, {signs[1]:+d} on {l2}")
    return (l1, l2), None


def check_fig3(p: SurgeryPresentation) -> RuleResult:
    rule, level = "rule_fig3", Level.C_VANISHES
    pair, na = _pair_annotation(p, p.annotations.fig3_configuration, rule, level, (1, -1))
    if na:
        return na
    l1, l2 = pair
    tau1 = p.declared_for(l1).tau
    if tau1 is None:
        return _na(rule, level, f"tau of {l1} not declared")
    d = p.data
    tb1, rot1, tb2 = d.tb[l1], d.rot[l1], d.tb[l2]
    lhs, rhs = tb1 + abs(rot1), 2 * tau1 - 1
    hyps = {"tb": tb1, "rot": rot1, "tau": tau1, "tb2": tb2,
            "tb_plus_abs_rot": lhs, "two_tau_minus_1": rhs}
    if tb2 == 1:
        return _result(rule, level, False, hyps, ["tb(L2) = 1 is excluded"])
    return _result(rule, level, lhs < rhs, hyps)


def check_main2(p: SurgeryPresentation) -> RuleResult:
    rule, level = "rule_main2", Level.OVERTWISTED
    pair, na = _pair_annotation(p, p.annotations.fig2_configuration, rule, level, (1, 1))
    if na:
        return na
    l1, l2 = pair
    d = p.data
    w = main2_witness(d.tb[l1], d.tb[l2], d.linking(l1, l2), d.cusps[l1], d.cusps[l2])
    hyps = {"tb1": d.tb[l1], "tb2": d.tb[l2], "l": d.linking(l1, l2),
            "tb_Lprime": w.tb_Lprime, "cusp_Lprime": F(w.cusp_Lprime),
            "framing_gap": w.framing_gap}
    return _result(rule, level, True, hyps,
                   ["L' bounds an overtwisted disk after the surgery (framing gap 0)"])


def _as_verdict(fn: Callable[..., RuleResult]) -> Callable[..., Verdict | None]:
    def wrapper(*args, **kwargs):
        return fn(*args, **kwargs).verdict
    wrapper.__name__ = fn.__name__.replace("check_", "rule_")
    wrapper.__doc__ = f"Verdict of :func:`{fn.__name__}` if it fires, else None."
    return wrapper


rule_stein = _as_verdict(check_stein)
rule_main1 = _as_verdict(check_main1)
rule_pro0 = _as_verdict(check_pro0)
rule_fig3 = _as_verdict(check_fig3)
rule_prop_tb = _as_verdict(check_prop_tb)
rule_cor0 = _as_verdict(check_cor0)
rule_main3_1 = _as_verdict(check_main3_1)
rule_main3_2 = _as_verdict(check_main3_2)
rule_cor2 = _as_verdict(check_cor2)
rule_main2 = _as_verdict(check_main2)

# Tie-break among fired rules of equal level: the more specific result first.
RULE_ORDER = (
    "rule_main2",
    "rule_cor2",
    "rule_main3_1",
    "rule_main3_2",
    "rule_pro0",
    "rule_fig3",
    "rule_main1",
    "rule_cor0",
    "rule_prop_tb",
    "rule_stein",
)


# -- orchestration ------------------------------------------------------------


def resolve_declared(p: SurgeryPresentation,
                     table: Mapping[str, KnotRecord] | None) -> SurgeryPresentation:
    """Fill tau / genus / L-space status from the knot table where a component
    names its knot type.  Explicit declarations win."""
    declared = dict(p.declared)
    for name, dec in p.declared.items():
        if dec.knot is None:
            continue
        if table is None or dec.knot not in table:
            raise InconsistentDataError(f"{name}: knot {dec.knot!r} not in the knot table")
        rec = table[dec.knot]
        if rec.tb_max is not None and p.data.tb[name] > rec.tb_max:
            raise InconsistentDataError(
                f"{name}: tb = {p.data.tb[name]} exceeds the maximum {rec.tb_max} of {rec.name}")
        declared[name] = replace(
            dec,
            tau=dec.tau if dec.tau is not None else rec.tau,
            genus=dec.genus if dec.genus is not None else rec.genus,
            l_space_knot=dec.l_space_knot if dec.l_space_knot is not None else rec.l_space_knot,
        )
    return replace(p, declared=declared)


def _record(name: str, dec: Declared) -> KnotRecord | None:
    if dec.genus is None or dec.l_space_knot is None:
        return None
    tau = dec.tau if dec.tau is not None else F(dec.genus) if dec.l_space_knot else None
    if tau is None:
        return None
    return KnotRecord(dec.knot or name, tau, dec.genus, dec.l_space_knot)


@dataclass
class Report:
    presentation: dict
    derived: dict
    rules: list[RuleResult]
    verdict: Verdict
    notes: list[str] = field(default_factory=list)

    def rule(self, name: str) -> RuleResult:
        for r in self.rules:
            if r.rule == name:
                return r
        raise KeyError(name)

    @property
    def fired(self) -> list[str]:
        return [r.rule for r in self.rules if r.fired]

    def to_dict(self) -> dict:
        return {
            "presentation": _encode(self.presentation),
            "derived": _encode(self.derived),
            "rules": [_rule_dict(r) for r in self.rules],
            "verdict": _verdict_dict(self.verdict),
            "notes": list(self.notes),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, obj: Mapping) -> "Report":
        rules = [RuleResult(r["rule"], r["status"], Level(r["level"]),
                            _decode_values(r["hypotheses"]), tuple(r["notes"]), r.get("scope"))
                 for r in obj["rules"]]
        v = obj["verdict"]
        verdict = Verdict(Level(v["level"]), v["rule"], _decode_values(v["hypotheses"]),
                          tuple(v["notes"]), v.get("scope"))
        return cls(obj["presentation"], _decode_values(obj["derived"]), rules, verdict,
                   list(obj["notes"]))

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls.from_dict(json.loads(text))

    def to_text(self) -> str:
        """Human-readable rendering; decimals in parentheses are approximate."""
        v = self.verdict
        out = [f"verdict: {v.level.value}" + (f" via {v.rule}" if v.rule else "")]
        if v.scope:
            out.append(f"  scope: {v.scope}")
        for k, val in v.hypotheses.items():
            out.append(f"  {k} = {_show(val)}")
        if self.derived:
            out.append("derived:")
            for k, val in self.derived.items():
                out.append(f"  {k} = {_show(val)}")
        out.append("rules:")
        for r in self.rules:
            hyps = ", ".join(f"{k}={_show(x, approx=False)}" for k, x in r.hypotheses.items())
            out.append(f"  {r.rule:<13} {r.status:<15} {r.level.value:<14} {hyps}")
            for note in r.notes:
                out.append(f"  {'':<13} - {note}")
        if self.notes:
            out.append("notes:")
            out.extend(f"  {n}" for n in self.notes)
        return "\n".join(out) + "\n"


def _encode(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, (str, int)):
        return obj
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, Mapping):
        return {str(k): _encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_encode(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _decode_values(obj: Mapping) -> dict:
    """Inverse of ``_encode`` for flat maps of rationals, booleans and lists."""
    out = {}
    for k, v in obj.items():
        out[k] = Fraction(v) if isinstance(v, str) else v
    return out


def _rule_dict(r: RuleResult) -> dict:
    return {"rule": r.rule, "status": r.status, "level": r.level.value,
            "hypotheses": _encode(r.hypotheses), "notes": list(r.notes), "scope": r.scope}


def _verdict_dict(v: Verdict) -> dict:
    return {"level": v.level.value, "rule": v.rule, "hypotheses": _encode(v.hypotheses),
            "notes": list(v.notes), "scope": v.scope}


def _show(val, approx: bool = True) -> str:
    if isinstance(val, Fraction) and not isinstance(val, bool):
        if approx and val.denominator != 1:
            return f"{val} (~{float(val):.6g})"
        return str(val)
    if isinstance(val, bool):
        return str(val).lower()
    return str(val)


def _echo(p: SurgeryPresentation) -> dict:
    d = p.data
    comps = []
    for n in d.names:
        dec = p.declared_for(n)
        entry: dict = {"name": n, "tb": d.tb[n], "rot": d.rot[n],
                       "sign": F(p.signs[n]) if n in p.signs else None}
        for key in ("knot", "tau", "tau_star", "genus", "l_space_knot", "order_q",
                    "tb_q", "rot_q", "chi"):
            v = getattr(dec, key)
            if v is not None:
                entry[key] = v if isinstance(v, (bool, str)) else F(v)
        comps.append(entry)
    lk = {f"{a},{b}": d.lk[(a, b)] for i, a in enumerate(d.names)
          for b in d.names[i + 1:]}
    ann = p.annotations
    annotations: dict = {}
    if ann.fig2_configuration:
        annotations["fig2_configuration"] = list(ann.fig2_configuration)
    if ann.fig3_configuration:
        annotations["fig3_configuration"] = list(ann.fig3_configuration)
    if ann.isolated_summand:
        s = ann.isolated_summand
        annotations["isolated_summand"] = {"component": s.component, "tb": s.tb,
                                           "rot": s.rot, "tau": s.tau}
    out = {"components": comps, "lk": lk, "distinguished": p.distinguished,
           "annotations": annotations}
    if p.ambient_l_space is not None:
        out["ambient_l_space"] = p.ambient_l_space
    return out


def _split_from_surgery(p: SurgeryPresentation) -> bool:
    if not p.surgered:
        return True
    c = p.data.contacts
    if c is None:
        return False
    return all(c[(p.distinguished, n)] == 0 for n in p.surgered)


def classify(p: SurgeryPresentation,
             table: Mapping[str, KnotRecord] | None = None,
             disabled: Iterable[str] = ()) -> Report:
    """Evaluate every applicable rule and combine the conclusions."""
    disabled = set(disabled)
    p = resolve_declared(p, table)
    d = p.data
    derived: dict = {}
    notes: list[str] = []
    results: list[RuleResult] = []

    def run(name: str, thunk: Callable[[], RuleResult]) -> None:
        if name in disabled:
            return
        results.append(thunk())

    run("rule_stein", lambda: check_stein(p))
    run("rule_main2", lambda: check_main2(p))
    run("rule_pro0", lambda: check_pro0(p))
    run("rule_fig3", lambda: check_fig3(p))

    L0 = p.distinguished
    image: dict = {}
    if L0 is not None:
        image = _image_data(p, derived, notes)

    def need(rule, level, *keys):
        missing = [k for k in keys if image.get(k) is None]
        if L0 is None:
            return _na(rule, level, "no distinguished knot")
        if p.signs.get(L0) != 1:
            return _na(rule, level, f"{L0} does not carry contact (+1)-surgery")
        if not image.get("is_qhs3"):
            return _na(rule, level, "surgery on the other components is not a QHS3")
        if missing:
            return _na(rule, level, "missing " + ", ".join(missing))
        return None

    def main1():
        return need("rule_main1", Level.C_VANISHES, "tb_q", "rot_q", "tau_star") or \
            check_main1(image["tb_q"], image["rot_q"], image["tau_star"])

    def prop_tb():
        return need("rule_prop_tb", Level.C_PLUS_VANISHES, "tb_q", "ambient_l_space") or \
            check_prop_tb(image["tb_q"], image["ambient_l_space"])

    def main3(check, rule):
        return lambda: need(rule, Level.OVERTWISTED, "tb_q", "rot_q", "chi", "q") or \
            check(image["tb_q"], image["rot_q"], image["chi"], image["q"])

    def cor0():
        rule, level = "rule_cor0", Level.C_PLUS_VANISHES
        if L0 is None:
            return _na(rule, level, "no distinguished knot")
        others = p.surgered
        if len(d.names) != 2 or p.signs.get(L0) != 1 or p.signs.get(others[0]) != 1:
            return _na(rule, level, "needs a two-component link with both signs +1")
        rec = _record(others[0], p.declared_for(others[0]))
        if rec is None:
            return _na(rule, level, f"genus / L-space status of {others[0]} not declared")
        return check_cor0(d.tb[L0], d.linking(L0, others[0]), rec)

    def cor2():
        rule, level = "rule_cor2", Level.OVERTWISTED
        pair, na = _pair_annotation(p, p.annotations.fig3_configuration, rule, level, (1, -1))
        if na:
            return na
        l1, l2 = pair
        g1, g2 = p.declared_for(l1).genus, p.declared_for(l2).genus
        if g1 is None or g2 is None:
            return _na(rule, level, "genus of both components must be declared")
        try:
            return check_cor2(d.tb[l1], d.rot[l1], d.tb[l2], d.rot[l2], g1, g2)
        except ExcludedCase as exc:
            return _na(rule, level, str(exc))

    run("rule_cor2", cor2)
    run("rule_main3_1", main3(check_main3_1, "rule_main3_1"))
    run("rule_main3_2", main3(check_main3_2, "rule_main3_2"))
    run("rule_main1", main1)
    run("rule_cor0", cor0)
    run("rule_prop_tb", prop_tb)

    stein = next((r for r in results if r.rule == "rule_stein" and r.fired), None)
    vanishing = [r for r in results if r.fired and r.level.vanishing]
    if stein and vanishing:
        raise InternalInconsistency(
            "Stein fillability contradicts " + ", ".join(r.rule for r in vanishing),
            [stein, *vanishing])

    fired = [r for r in results if r.fired]
    if fired:
        best = max(fired, key=lambda r: (r.level.rank, -RULE_ORDER.index(r.rule)))
        verdict = best.verdict
    else:
        verdict = Verdict(Level.INCONCLUSIVE, None, {}, ("no criterion applies",))
    order = {name: i for i, name in enumerate(RULE_ORDER)}
    results.sort(key=lambda r: order[r.rule])
    return Report(_echo(p), derived, results, verdict, notes)


def _image_data(p: SurgeryPresentation, derived: dict, notes: list[str]) -> dict:
    """Invariants of the distinguished knot's image after the other surgeries."""
    d = p.data
    L0 = p.distinguished
    dec = p.declared_for(L0)
    m = build_matrices(p)
    h: HomologyData = homology(m)
    image: dict = {"is_qhs3": h.is_qhs3}
    derived["det_M"] = h.det_M
    derived["is_qhs3"] = h.is_qhs3
    derived["torsion"] = h.torsion
    if not h.is_qhs3:
        notes.append("det M = 0: surgery on the other components is not a QHS3")
        return image

    tb_q, rot_q = surgery_transform(m, d.tb[L0], d.rot[L0])
    for key, computed in (("tb_q", tb_q), ("rot_q", rot_q)):
        given = getattr(dec, key)
        if given is not None and given != computed:
            raise InconsistentDataError(
                f"declared {key} = {given} but the linking data give {computed}")
    q = h.order_of_class
    if dec.order_q is not None:
        if q is not None and dec.order_q != q:
            raise InconsistentDataError(
                f"declared q = {dec.order_q} but the class of {L0} has order {q}")
        q = dec.order_q
    image.update(tb_q=tb_q, rot_q=rot_q, q=q)
    derived.update(tb_q=tb_q, rot_q=rot_q, q=F(q) if q is not None else None)

    chi, source = _euler_characteristic(p)
    image["chi"] = chi
    derived["chi"] = chi
    if source:
        notes.append(f"chi: {source}")

    tau_star = dec.tau_star
    if tau_star is None and not p.surgered and dec.tau is not None:
        tau_star = dec.tau
        notes.append("tau_star: equals tau in the standard 3-sphere")
    image["tau_star"] = tau_star
    derived["tau_star"] = tau_star

    ambient = p.ambient_l_space
    if ambient is None:
        ambient = _ambient_l_space(p, notes)
    image["ambient_l_space"] = ambient
    derived["ambient_l_space"] = ambient

    if tb_q != -1:
        dtb, drot = dual_invariants(tb_q, rot_q)
        derived.update(dual_tb=dtb, dual_rot=drot)
        if q is not None:
            dq = dual_order(q, tb_q)
            derived["dual_order"] = F(dq)
            if chi is not None and tb_q < -1:
                # stabilize the dual until its tb is negative, in the direction of rot
                k = int(dtb) + 1
                stb, srot = stabilize(dtb, drot, 1 if drot >= 0 else -1, k)
                note = rule_loose(stb, srot, chi, dq)
                derived["dual_stabilized_loose"] = note is not None
                if note:
                    notes.append(f"dual knot after {k} stabilizations is {note}")
    return image


def _euler_characteristic(p: SurgeryPresentation) -> tuple[Fraction | None, str]:
    L0 = p.distinguished
    dec = p.declared_for(L0)
    if dec.chi is not None:
        return F(dec.chi), "declared"
    pair = p.annotations.fig3_configuration
    if pair and pair[0] == L0 and set(p.data.names) == set(pair) and p.signs.get(pair[1]) == -1:
        g1, g2 = dec.genus, p.declared_for(pair[1]).genus
        tb2 = p.data.tb[pair[1]]
        if g1 is not None and g2 is not None and tb2 != 1:
            return rational_seifert_euler(g1, g2, tb2), "connected sum with the meridional unknot"
    if dec.genus is not None and _split_from_surgery(p):
        return F(1 - 2 * dec.genus), "1 - 2g (split from the surgered components)"
    return None, ""


def _ambient_l_space(p: SurgeryPresentation, notes: list[str]) -> bool | None:
    others = p.surgered
    if not others:
        notes.append("ambient: the standard 3-sphere is a tight contact L-space")
        return True
    if len(others) == 1 and p.signs.get(others[0]) == 1:
        dec = p.declared_for(others[0])
        if dec.l_space_knot and dec.genus is not None and p.data.tb[others[0]] == 2 * dec.genus - 1:
            notes.append(f"ambient: (+1)-surgery on the L-space knot {others[0]} with "
                         "tb = 2g-1 is a tight contact L-space")
            return True
    return None
