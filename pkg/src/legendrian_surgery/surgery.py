"""Contact (+/-1)-surgery arithmetic on linking data.

Given classical data of a Legendrian link, a sign per surgered component and
a distinguished knot ``L0`` left out of the surgery, this module builds the
linking matrix ``M`` and its bordered version ``M0`` and pushes ``tb`` and
``rot`` of ``L0`` into the surgered manifold.  It also carries the small
closed-form identities used by the classification rules: the surgery dual
knot, stabilization, connected sum and the Euler characteristic of a rational
Seifert surface after a connected sum.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .invariants import ClassicalData
from .linalg import class_order, determinant, smith_normal_form, solve

__all__ = [
    "SurgeryError",
    "NotQHS3Error",
    "DegenerateSurgeryError",
    "InconsistentDataError",
    "Declared",
    "IsolatedSummand",
    "Annotations",
    "SurgeryPresentation",
    "LinkingMatrices",
    "HomologyData",
    "build_matrices",
    "surgery_transform",
    "smith_normal_form",
    "homology",
    "dual_invariants",
    "dual_order",
    "stabilize",
    "connected_sum",
    "tau_star_sum",
    "rational_seifert_euler",
    "Main2Witness",
    "main2_witness",
]


class SurgeryError(ValueError):
    pass


class NotQHS3Error(SurgeryError):
    """det M = 0: the surgered manifold is not a rational homology sphere."""


class DegenerateSurgeryError(SurgeryError):
    pass


class InconsistentDataError(SurgeryError):
    pass


@dataclass(frozen=True)
class Declared:
    """Data about one component that is supplied rather than computed.

    ``tb_q``, ``rot_q``, ``chi`` and ``order_q`` only make sense for the
    distinguished knot and describe its image after the other surgeries.
    """

    tau: Fraction | None = None
    tau_star: Fraction | None = None
    genus: int | None = None
    l_space_knot: bool | None = None
    order_q: int | None = None
    tb_q: Fraction | None = None
    rot_q: Fraction | None = None
    chi: Fraction | None = None
    knot: str | None = None

    def __post_init__(self):
        if self.genus is not None and self.genus < 0:
            raise ValueError("genus must be nonnegative")
        if self.order_q is not None and self.order_q < 1:
            raise ValueError("order_q must be a positive integer")


@dataclass(frozen=True)
class IsolatedSummand:
    """``component`` contains an isolated connected summand with these data."""

    component: str
    tb: Fraction
    rot: Fraction
    tau: Fraction


@dataclass(frozen=True)
class Annotations:
    fig2_configuration: tuple[str, str] | None = None
    fig3_configuration: tuple[str, str] | None = None
    isolated_summand: IsolatedSummand | None = None

    def is_empty(self) -> bool:
        return (self.fig2_configuration is None and self.fig3_configuration is None
                and self.isolated_summand is None)


@dataclass(frozen=True)
class SurgeryPresentation:
    """A Legendrian link in the standard 3-sphere with surgery instructions.

    ``signs`` holds +1/-1 for every component that is surgered.  The
    distinguished knot, when given, is left out of ``M``; its own entry in
    ``signs`` (if any) is the contact surgery later performed on its image.
    """

    data: ClassicalData
    signs: Mapping[str, int]
    distinguished: str | None = None
    declared: Mapping[str, Declared] = field(default_factory=dict)
    annotations: Annotations = field(default_factory=Annotations)
    ambient_l_space: bool | None = None

    def __post_init__(self):
        names = set(self.data.names)
        for name, s in self.signs.items():
            if name not in names:
                raise SurgeryError(f"sign given for unknown component {name!r}")
            if s not in (1, -1):
                raise SurgeryError(f"surgery sign of {name} must be +1 or -1")
        for name in self.data.names:
            if name != self.distinguished and name not in self.signs:
                raise SurgeryError(f"component {name} has no surgery sign")
        if self.distinguished is not None and self.distinguished not in names:
            raise SurgeryError(f"unknown distinguished component {self.distinguished!r}")
        for name in self.declared:
            if name not in names:
                raise SurgeryError(f"declared data for unknown component {name!r}")

    @property
    def surgered(self) -> tuple[str, ...]:
        return tuple(n for n in self.data.names if n != self.distinguished)

    def declared_for(self, name: str) -> Declared:
        return self.declared.get(name, Declared())


@dataclass(frozen=True)
class LinkingMatrices:
    names: tuple[str, ...]          # surgered components, row order of M
    M: list[list[Fraction]]
    M0: list[list[Fraction]]
    l0: list[Fraction]
    rotv: list[Fraction]


@dataclass(frozen=True)
class HomologyData:
    det_M: Fraction
    is_qhs3: bool
    torsion: list[int] | None       # elementary divisors != 1; None if M not integral
    order_of_class: int | None      # None means infinite order


def build_matrices(p: SurgeryPresentation) -> LinkingMatrices:
    if p.distinguished is None:
        raise SurgeryError("presentation has no distinguished knot")
    d = p.data
    names = p.surgered
    l0 = [d.linking(p.distinguished, n) for n in names]
    M = [[d.tb[a] + p.signs[a] if a == b else d.linking(a, b) for b in names]
         for a in names]
    M0 = [[Fraction(0)] + l0]
    for i, a in enumerate(names):
        M0.append([l0[i]] + M[i])
    rotv = [d.rot[n] for n in names]
    return LinkingMatrices(names, M, M0, l0, rotv)


def surgery_transform(m: LinkingMatrices, tb0, rot0) -> tuple[Fraction, Fraction]:
    """(tb, rot) of the distinguished knot's image after surgery on ``m``."""
    det_m = determinant(m.M)
    if det_m == 0:
        raise NotQHS3Error("det M = 0; the surgered manifold is not a QHS3")
    tb = Fraction(tb0) + determinant(m.M0) / det_m
    rot = Fraction(rot0)
    if m.l0:
        x = solve(m.M, m.l0)
        rot -= sum(r * xi for r, xi in zip(m.rotv, x))
    return tb, rot


def homology(m: LinkingMatrices, q_scale: int = 1) -> HomologyData:
    """H_1 data of the surgered manifold and the order of the class of L0 in it.

    Entries are multiplied by ``q_scale`` first and must then be integers.
    """
    if q_scale < 1:
        raise ValueError("q_scale must be a positive integer")
    det_m = determinant(m.M)
    scaled = [[v * q_scale for v in row] for row in m.M]
    vec = [v * q_scale for v in m.l0]
    if any(v.denominator != 1 for row in scaled for v in row) or any(
            v.denominator != 1 for v in vec):
        raise SurgeryError("linking data not integral after scaling by q_scale")
    ints = [[int(v) for v in row] for row in scaled]
    divisors = smith_normal_form(ints).divisors
    torsion = [d for d in divisors if d != 1]
    order = class_order(ints, [int(v) for v in vec])
    return HomologyData(det_m, det_m != 0, torsion, order)


def dual_invariants(tb, rot) -> tuple[Fraction, Fraction]:
    """(tb, rot) of the surgery dual knot after contact (+1)-surgery."""
    tb, rot = Fraction(tb), Fraction(rot)
    if tb == -1:
        raise DegenerateSurgeryError("tb = -1: the dual knot formulas degenerate")
    return tb / (tb + 1), rot / (tb + 1)


def dual_order(q: int, tb) -> int:
    """Order of the surgery dual knot in H_1 of the surgered manifold."""
    if q < 1:
        raise ValueError("q must be a positive integer")
    value = q * abs(Fraction(tb) + 1)
    if value == 0:
        raise DegenerateSurgeryError("tb = -1: the dual knot has infinite order")
    if value.denominator != 1:
        raise InconsistentDataError(f"q*|tb+1| = {value} is not an integer")
    return int(value)


def stabilize(tb, rot, sign: int, k: int = 1) -> tuple[Fraction, Fraction]:
    if sign not in (1, -1):
        raise ValueError("stabilization sign must be +1 or -1")
    if k < 0:
        raise ValueError("k must be nonnegative")
    return Fraction(tb) - k, Fraction(rot) + sign * k


def connected_sum(tb1, rot1, tb2, rot2) -> tuple[Fraction, Fraction]:
    return Fraction(tb1) + Fraction(tb2) + 1, Fraction(rot1) + Fraction(rot2)


def tau_star_sum(t1, t2) -> Fraction:
    return Fraction(t1) + Fraction(t2)


def rational_seifert_euler(g1: int, g2: int, tb2) -> Fraction:
    """Euler characteristic of the rational Seifert surface of U # L1 in S^3(L2^-).

    ``U`` is the meridional unknot of ``L2``; ``g1``, ``g2`` the genera of
    ``L1`` and ``L2``.
    """
    tb2 = Fraction(tb2)
    if tb2 == 1:
        raise DegenerateSurgeryError("tb(L2) = 1: contact (-1)-surgery gives S^1 x S^2")
    if g1 < 0 or g2 < 0:
        raise ValueError("genera must be nonnegative")
    return 1 - 2 * g2 - 2 * g1 * abs(1 - tb2)


@dataclass(frozen=True)
class Main2Witness:
    tb_Lprime: Fraction
    cusp_Lprime: int
    writhe_Lprime: Fraction
    surface_framing: Fraction
    capping_framings: tuple[Fraction, Fraction]
    framing_gap: Fraction


def main2_witness(tb1, tb2, l, c1: int, c2: int) -> Main2Witness:
    """Arithmetic of the overtwisted disk bounded by the auxiliary knot L'.

    L' runs along pushed-off arcs of L1 and L2 and bounds a thrice-punctured
    sphere S with them.  Its contact framing is computed from writhe and
    cusps, its S-framing from the push-off crossings; the two must agree.
    """
    tb1, tb2, l = Fraction(tb1), Fraction(tb2), Fraction(l)
    if c1 < 2 or c2 < 2 or c1 % 2 or c2 % 2:
        raise ValueError("cusp counts must be even and at least 2")
    tb_formula = tb1 + tb2 + 2 * (l + 1)
    w1 = tb1 + Fraction(c1, 2)
    w2 = tb2 + Fraction(c2, 2)
    # self-crossings outside the box, minus the one crossing inside it
    writhe_p = w1 + w2 + 2 * (l + 1) - 1
    cusps_p = c1 + c2 - 2
    tb_contact = writhe_p - Fraction(cusps_p, 2)
    surface = (tb1 + tb2 + 1 + 2 * (l + 1)) - 1
    gap = surface - tb_contact
    if tb_contact != tb_formula or gap != 0:
        raise InconsistentDataError("overtwisted disk framing check failed")
    return Main2Witness(tb_formula, cusps_p, writhe_p, surface, (tb1 + 1, tb2 + 1), gap)
