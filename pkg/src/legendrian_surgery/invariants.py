"""Classical invariants of a Legendrian link read off its front diagram.

All values are returned as :class:`fractions.Fraction` so they feed the
surgery formulas, which produce genuine rationals, without coercion.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .front import Diagram

__all__ = [
    "ClassicalData",
    "writhe",
    "cusp_counts",
    "thurston_bennequin",
    "rotation",
    "linking_number",
    "classical_data",
]

ComponentKey = int | str


def _index(d: Diagram, c: ComponentKey) -> int:
    return d.component(c).index


def writhe(d: Diagram, c: ComponentKey) -> int:
    k = _index(d, c)
    return sum(x.sign for x in d.crossings if x.components == (k, k))


def cusp_counts(d: Diagram, c: ComponentKey) -> tuple[int, int]:
    """(up, down) cusp counts in the traversal direction of component ``c``."""
    comp = d.component(c)
    return comp.up, comp.down


def thurston_bennequin(d: Diagram, c: ComponentKey) -> Fraction:
    up, down = cusp_counts(d, c)
    return Fraction(writhe(d, c)) - Fraction(up + down, 2)


def rotation(d: Diagram, c: ComponentKey) -> Fraction:
    up, down = cusp_counts(d, c)
    return Fraction(down - up, 2)


def linking_number(d: Diagram, a: ComponentKey, b: ComponentKey) -> Fraction:
    i, j = _index(d, a), _index(d, b)
    if i == j:
        raise ValueError("linking_number needs two distinct components; "
                         "use thurston_bennequin for self-framing")
    total = sum(x.sign for x in d.crossings if set(x.components) == {i, j})
    return Fraction(total, 2)


@dataclass(frozen=True)
class ClassicalData:
    """Per-component tb/rot plus pairwise linking numbers, keyed by name.

    ``writhe`` and ``cusps`` are kept alongside because some witness
    computations work with them directly.  ``contacts`` counts (unsigned)
    front crossings between two components; zero means the diagram is split
    there.
    """

    names: tuple[str, ...]
    tb: Mapping[str, Fraction]
    rot: Mapping[str, Fraction]
    lk: Mapping[tuple[str, str], Fraction]
    writhe: Mapping[str, int]
    cusps: Mapping[str, int]
    contacts: Mapping[tuple[str, str], int] | None = None

    def linking(self, a: str, b: str) -> Fraction:
        if a == b:
            raise ValueError("no self-linking entry; use tb")
        return self.lk[(a, b)]

    @classmethod
    def from_values(cls, tb, rot, lk=None, cusps=None) -> "ClassicalData":
        """Assemble data given directly rather than read off a diagram.

        ``lk`` may list each unordered pair once; missing pairs are 0.
        Cusp counts default to 2 and writhes are then implied by tb.
        """
        names = tuple(tb)
        tb = {n: Fraction(tb[n]) for n in names}
        rot = {n: Fraction(rot[n]) for n in names}
        cusps = dict(cusps or {})
        full: dict[tuple[str, str], Fraction] = {}
        for a in names:
            cusps.setdefault(a, 2)
            for b in names:
                if a != b:
                    v = (lk or {}).get((a, b), (lk or {}).get((b, a), 0))
                    full[(a, b)] = Fraction(v)
        writhe = {n: tb[n] + Fraction(cusps[n], 2) for n in names}
        return cls(names, tb, rot, full, writhe, cusps)

    def __post_init__(self):
        for (a, b), v in self.lk.items():
            if self.lk.get((b, a)) != v:
                raise ValueError(f"linking data not symmetric at {a}, {b}")


def classical_data(d: Diagram) -> ClassicalData:
    names = d.names
    tb = {c.name: thurston_bennequin(d, c.index) for c in d.components}
    rot = {c.name: rotation(d, c.index) for c in d.components}
    lk: dict[tuple[str, str], Fraction] = {}
    contacts: dict[tuple[str, str], int] = {}
    for i, a in enumerate(names):
        for j, b in enumerate(names):
            if i != j:
                lk[(a, b)] = linking_number(d, i, j)
                contacts[(a, b)] = sum(1 for x in d.crossings if set(x.components) == {i, j})
    return ClassicalData(
        names=names,
        tb=tb,
        rot=rot,
        lk=lk,
        writhe={c.name: writhe(d, c.index) for c in d.components},
        cusps={c.name: c.cusps for c in d.components},
        contacts=contacts,
    )
