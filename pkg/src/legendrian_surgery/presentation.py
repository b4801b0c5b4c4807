"""Reader for surgery presentation files.

A presentation file is line oriented with four blocks::

    [front]
    path = fig6.front          # relative to this file, or inline tokens below
    [surgery]
    L1 = +1
    L2 = +1
    distinguished = L1
    [declared]
    L2.knot = right-trefoil
    L1.tau_star = 0
    ambient_l_space = true
    [annotations]
    fig3_configuration L1 L2
    isolated_summand L1 tb=-3 rot=0 tau=0

``#`` starts a comment.  The ``[front]`` block holds either a ``path``
entry or the front word itself (tokens and ``@component`` directives).
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .front import Diagram, FrontWord, build_diagram, parse_front_word
from .invariants import classical_data
from .surgery import Annotations, Declared, IsolatedSummand, SurgeryPresentation

__all__ = ["PresentationError", "PresentationFile", "parse_presentation", "load_presentation"]

SECTIONS = ("front", "surgery", "declared", "annotations")
_FRACTION_KEYS = {"tau", "tau_star", "tb_q", "rot_q", "chi"}
_INT_KEYS = {"genus", "order_q"}
_BOOL_KEYS = {"l_space_knot"}


class PresentationError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


@dataclass(frozen=True)
class PresentationFile:
    word: FrontWord
    diagram: Diagram
    presentation: SurgeryPresentation
    source: str | None = None


def _fraction(text: str, line: int) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise PresentationError(f"not a rational number: {text!r}", line) from None


def _bool(text: str, line: int) -> bool:
    low = text.lower()
    if low in ("true", "yes", "1"):
        return True
    if low in ("false", "no", "0"):
        return False
    raise PresentationError(f"not a boolean: {text!r}", line)


def _split_blocks(text: str) -> dict[str, list[tuple[int, str]]]:
    blocks: dict[str, list[tuple[int, str]]] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip()
            if current not in SECTIONS:
                raise PresentationError(f"unknown block [{current}]", lineno)
            if current in blocks:
                raise PresentationError(f"duplicate block [{current}]", lineno)
            blocks[current] = []
            continue
        if current is None:
            raise PresentationError("content before the first block", lineno)
        blocks[current].append((lineno, line))
    return blocks


def _key_value(line: str, lineno: int) -> tuple[str, str]:
    if "=" not in line:
        raise PresentationError(f"expected key = value, got {line!r}", lineno)
    key, value = (s.strip() for s in line.split("=", 1))
    if not key or not value:
        raise PresentationError(f"expected key = value, got {line!r}", lineno)
    return key, value


def _read_front(lines, base: Path | None) -> FrontWord:
    if len(lines) == 1 and lines[0][1].replace(" ", "").startswith("path="):
        lineno, line = lines[0]
        _, rel = _key_value(line, lineno)
        path = Path(rel)
        if not path.is_absolute() and base is not None:
            path = base / path
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise PresentationError(f"cannot read front file {path}: {exc}", lineno) from None
        return parse_front_word(text)
    return parse_front_word("\n".join(line for _, line in lines))


def parse_presentation(text: str, base: str | os.PathLike | None = None) -> PresentationFile:
    """Parse presentation source; relative front paths resolve against ``base``."""
    blocks = _split_blocks(text)
    if "front" not in blocks:
        raise PresentationError("missing [front] block")
    word = _read_front(blocks["front"], Path(base) if base is not None else None)
    diagram = build_diagram(word)
    data = classical_data(diagram)
    names = set(data.names)

    def known(name: str, lineno: int) -> str:
        if name not in names:
            raise PresentationError(f"unknown component {name!r}", lineno)
        return name

    signs: dict[str, int] = {}
    distinguished = None
    for lineno, line in blocks.get("surgery", []):
        key, value = _key_value(line, lineno)
        if key == "distinguished":
            distinguished = known(value, lineno)
            continue
        known(key, lineno)
        if value not in ("+1", "-1", "1"):
            raise PresentationError(f"surgery coefficient must be +1 or -1, got {value!r}", lineno)
        signs[key] = -1 if value == "-1" else 1

    fields: dict[str, dict] = {}
    ambient = None
    for lineno, line in blocks.get("declared", []):
        key, value = _key_value(line, lineno)
        if key == "ambient_l_space":
            ambient = _bool(value, lineno)
            continue
        if "." not in key:
            raise PresentationError(f"expected <component>.<field>, got {key!r}", lineno)
        comp, attr = key.split(".", 1)
        known(comp, lineno)
        if attr in _FRACTION_KEYS:
            parsed = _fraction(value, lineno)
        elif attr in _INT_KEYS:
            f = _fraction(value, lineno)
            if f.denominator != 1:
                raise PresentationError(f"{attr} must be an integer", lineno)
            parsed = int(f)
        elif attr in _BOOL_KEYS:
            parsed = _bool(value, lineno)
        elif attr == "knot":
            parsed = value
        else:
            raise PresentationError(f"unknown declared field {attr!r}", lineno)
        fields.setdefault(comp, {})[attr] = parsed
    try:
        declared = {c: Declared(**kw) for c, kw in fields.items()}
    except ValueError as exc:
        raise PresentationError(str(exc)) from None

    fig2 = fig3 = summand = None
    for lineno, line in blocks.get("annotations", []):
        parts = line.split()
        kind, args = parts[0], parts[1:]
        if kind in ("fig2_configuration", "fig3_configuration"):
            if len(args) != 2:
                raise PresentationError(f"{kind} takes two component names", lineno)
            pair = (known(args[0], lineno), known(args[1], lineno))
            if kind == "fig2_configuration":
                fig2 = pair
            else:
                fig3 = pair
        elif kind == "isolated_summand":
            if not args:
                raise PresentationError("isolated_summand needs a component", lineno)
            values = {}
            for item in args[1:]:
                k, v = _key_value(item, lineno)
                values[k] = _fraction(v, lineno)
            if set(values) != {"tb", "rot", "tau"}:
                raise PresentationError("isolated_summand needs tb=, rot= and tau=", lineno)
            summand = IsolatedSummand(known(args[0], lineno), **values)
        else:
            raise PresentationError(f"unknown annotation {kind!r}", lineno)

    try:
        p = SurgeryPresentation(data, signs, distinguished, declared,
                                Annotations(fig2, fig3, summand), ambient)
    except ValueError as exc:
        raise PresentationError(str(exc)) from None
    return PresentationFile(word, diagram, p)


def load_presentation(path: str | os.PathLike) -> PresentationFile:
    path = Path(path)
    pf = parse_presentation(path.read_text(encoding="utf-8"), base=path.parent)
    return PresentationFile(pf.word, pf.diagram, pf.presentation, str(path))
