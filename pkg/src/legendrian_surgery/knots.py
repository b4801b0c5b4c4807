"""Declared knot data: tau, genus and L-space status, read from a table file.

These invariants come from Heegaard Floer theory and are not computed here.
The table format is line oriented::

    # name  tau  genus  l_space_knot  [tb_max]
    right-trefoil  1  1  true  1
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path

__all__ = ["KnotRecord", "KnotTableError", "parse_knot_table", "load_knot_table",
           "default_knot_table", "KNOT_TABLE_ENV"]

KNOT_TABLE_ENV = "LEGSURG_KNOT_TABLE"


class KnotTableError(ValueError):
    pass


@dataclass(frozen=True)
class KnotRecord:
    name: str
    tau: Fraction
    genus: int
    l_space_knot: bool
    tb_max: int | None = None

    def __post_init__(self):
        if self.genus < 0:
            raise KnotTableError(f"{self.name}: negative genus")
        # L-space knots have tau equal to the genus
        if self.l_space_knot and self.tau != self.genus:
            raise KnotTableError(f"{self.name}: L-space knot with tau != genus")


def _bool(tok: str, lineno: int) -> bool:
    low = tok.lower()
    if low in ("true", "yes", "1"):
        return True
    if low in ("false", "no", "0"):
        return False
    raise KnotTableError(f"line {lineno}: expected a boolean, got {tok!r}")


def parse_knot_table(text: str) -> dict[str, KnotRecord]:
    table: dict[str, KnotRecord] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].split()
        if not line:
            continue
        if len(line) not in (4, 5):
            raise KnotTableError(f"line {lineno}: expected 4 or 5 fields")
        name = line[0]
        try:
            tau = Fraction(int(line[1]))
            genus = int(line[2])
            tb_max = int(line[4]) if len(line) == 5 else None
        except ValueError:
            raise KnotTableError(f"line {lineno}: malformed integer") from None
        if name in table:
            raise KnotTableError(f"line {lineno}: duplicate knot {name!r}")
        table[name] = KnotRecord(name, tau, genus, _bool(line[3], lineno), tb_max)
    return table


def load_knot_table(path: str | os.PathLike) -> dict[str, KnotRecord]:
    return parse_knot_table(Path(path).read_text(encoding="utf-8"))


def default_knot_table() -> dict[str, KnotRecord]:
    """The bundled table, unless ``$LEGSURG_KNOT_TABLE`` points elsewhere."""
    override = os.environ.get(KNOT_TABLE_ENV)
    if override:
        return load_knot_table(override)
    text = resources.files("legendrian_surgery").joinpath("data/knots.txt").read_text("utf-8")
    return parse_knot_table(text)
