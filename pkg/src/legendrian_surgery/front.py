"""Front words: a combinatorial encoding of Legendrian link front projections.

A front is read left to right as a sequence of elementary events acting on
the strands of a vertical slice, numbered 1, 2, ... from the top:

* ``u<i>`` -- left cusp, creates two new strands at levels i and i+1;
* ``a<i>`` -- right cusp, joins the strands at levels i and i+1;
* ``x<i>`` -- crossing, the strands at levels i and i+1 swap.

At a crossing the strand coming from level i descends, so it has the more
negative slope and passes over the other one.

Source text may also carry ``#`` comments and directives
``@component <k> <name> <+|->`` naming the k-th traced component
(components are numbered from 1 in order of their first left cusp) and
fixing its orientation: ``+`` keeps the default orientation, ``-`` reverses
it.  The default orientation leaves the component's first left cusp along
its upper branch, i.e. moving to the right.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

__all__ = [
    "LEFT_CUSP",
    "RIGHT_CUSP",
    "CROSSING",
    "Event",
    "ComponentSpec",
    "FrontWord",
    "Crossing",
    "Component",
    "Diagram",
    "FrontSyntaxError",
    "FrontValidityError",
    "OrientationError",
    "parse_front_word",
    "format_front_word",
    "validate_events",
    "build_diagram",
    "count_components_by_rank",
    "connected_sum_words",
    "push_off_word",
    "commute_events",
    "stabilize_word",
]

LEFT_CUSP = "u"
RIGHT_CUSP = "a"
CROSSING = "x"

_TOKEN = re.compile(r"^([uax])([1-9][0-9]*)$")


class FrontSyntaxError(ValueError):
    """Unknown token or malformed level."""

    def __init__(self, message: str, event_index: int | None = None, line: int | None = None):
        self.event_index = event_index
        self.line = line
        where = []
        if event_index is not None:
            where.append(f"event {event_index}")
        if line is not None:
            where.append(f"line {line}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)


class FrontValidityError(ValueError):
    """The event sequence does not describe a closed front.

    ``event_index`` is 1-based; it points one past the last event when the
    word ends with open strands.
    """

    def __init__(self, message: str, event_index: int):
        self.event_index = event_index
        super().__init__(f"event {event_index}: {message}")


class OrientationError(ValueError):
    pass


@dataclass(frozen=True)
class Event:
    kind: str
    level: int

    def __str__(self) -> str:
        return f"{self.kind}{self.level}"


@dataclass(frozen=True)
class ComponentSpec:
    """Name and orientation attached to the k-th traced component (1-based)."""

    position: int
    name: str
    reversed: bool = False


@dataclass(frozen=True)
class FrontWord:
    events: tuple[Event, ...]
    directives: tuple[ComponentSpec, ...] = ()

    def __len__(self) -> int:
        return len(self.events)

    def __str__(self) -> str:
        return format_front_word(self)

    @classmethod
    def from_tokens(cls, tokens: str | Iterable[str]) -> "FrontWord":
        return parse_front_word(tokens if isinstance(tokens, str) else " ".join(tokens))


def _delta(kind: str) -> int:
    return {LEFT_CUSP: 2, RIGHT_CUSP: -2, CROSSING: 0}[kind]


def validate_events(events: Sequence[Event]) -> None:
    """Check the strand-count invariants; raise FrontValidityError otherwise."""
    count = 0
    for idx, ev in enumerate(events, start=1):
        if ev.level < 1:
            raise FrontValidityError(f"level {ev.level} is not positive", idx)
        if ev.kind == LEFT_CUSP:
            if ev.level > count + 1:
                raise FrontValidityError(
                    f"left cusp at level {ev.level} with only {count} strands", idx)
        elif ev.level + 1 > count:
            raise FrontValidityError(
                f"{'right cusp' if ev.kind == RIGHT_CUSP else 'crossing'} at level "
                f"{ev.level} needs strands {ev.level} and {ev.level + 1}, have {count}", idx)
        count += _delta(ev.kind)
    if count != 0:
        raise FrontValidityError(f"{count} strands left open at the end of the word",
                                 len(events) + 1)


def parse_front_word(text: str) -> FrontWord:
    events: list[Event] = []
    directives: list[ComponentSpec] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("@"):
            directives.append(_parse_directive(line, lineno))
            continue
        for tok in line.split():
            m = _TOKEN.match(tok)
            if m is None:
                raise FrontSyntaxError(f"bad token {tok!r}", len(events) + 1, lineno)
            events.append(Event(m.group(1), int(m.group(2))))
    validate_events(events)
    positions = [d.position for d in directives]
    if len(set(positions)) != len(positions):
        raise FrontSyntaxError("duplicate @component directive")
    names = [d.name for d in directives]
    if len(set(names)) != len(names):
        raise FrontSyntaxError("duplicate component name")
    return FrontWord(tuple(events), tuple(sorted(directives, key=lambda d: d.position)))


def _parse_directive(line: str, lineno: int) -> ComponentSpec:
    parts = line.split()
    if parts[0] != "@component" or len(parts) not in (3, 4):
        raise FrontSyntaxError(f"bad directive {line!r}", line=lineno)
    try:
        position = int(parts[1])
    except ValueError:
        raise FrontSyntaxError(f"bad component index {parts[1]!r}", line=lineno) from None
    if position < 1:
        raise FrontSyntaxError("component index must be positive", line=lineno)
    sign = parts[3] if len(parts) == 4 else "+"
    if sign not in ("+", "-"):
        raise FrontSyntaxError(f"orientation must be + or -, got {sign!r}", line=lineno)
    return ComponentSpec(position, parts[2], sign == "-")


def format_front_word(word: FrontWord, width: int = 16) -> str:
    lines = []
    toks = [str(e) for e in word.events]
    for i in range(0, len(toks), width):
        lines.append(" ".join(toks[i:i + width]))
    for d in word.directives:
        lines.append(f"@component {d.position} {d.name} {'-' if d.reversed else '+'}")
    return "\n".join(lines) + "\n"


# -- diagrams ---------------------------------------------------------------


@dataclass(frozen=True)
class Crossing:
    event: int          # 0-based event index
    over: int           # strand ids
    under: int
    components: tuple[int, int]   # (over component, under component)
    sign: int


@dataclass(frozen=True)
class Component:
    index: int
    name: str
    path: tuple[tuple[int, str], ...]   # (event index, role) in traversal order
    up: int
    down: int

    @property
    def cusps(self) -> int:
        return self.up + self.down


@dataclass(frozen=True)
class Diagram:
    word: FrontWord
    components: tuple[Component, ...]
    crossings: tuple[Crossing, ...]
    orientations: tuple[int, ...]                  # +1 default, -1 reversed
    strand_component: tuple[int, ...] = field(repr=False)
    strand_direction: tuple[int, ...] = field(repr=False)   # +1 rightward

    def component(self, key: int | str) -> Component:
        if isinstance(key, str):
            for c in self.components:
                if c.name == key:
                    return c
            raise KeyError(f"unknown component {key!r}")
        if not 0 <= key < len(self.components):
            raise KeyError(f"unknown component index {key}")
        return self.components[key]

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.components)


@dataclass
class _Strand:
    left: int                 # event of the left cusp
    left_upper: bool          # upper branch of that cusp?
    right: int = -1
    right_upper: bool = False
    crossings: list[int] = field(default_factory=list)


def _strands(events: Sequence[Event]):
    """Sweep the word; return strands, cusp partners and crossings."""
    strands: list[_Strand] = []
    slots: list[int] = []
    left_pairs: dict[int, tuple[int, int]] = {}
    right_pairs: dict[int, tuple[int, int]] = {}
    crossings: list[tuple[int, int, int]] = []
    for idx, ev in enumerate(events):
        i = ev.level - 1
        if ev.kind == LEFT_CUSP:
            top, bot = len(strands), len(strands) + 1
            strands.append(_Strand(idx, True))
            strands.append(_Strand(idx, False))
            slots[i:i] = [top, bot]
            left_pairs[idx] = (top, bot)
        elif ev.kind == CROSSING:
            over, under = slots[i], slots[i + 1]
            strands[over].crossings.append(idx)
            strands[under].crossings.append(idx)
            crossings.append((idx, over, under))
            slots[i], slots[i + 1] = under, over
        else:
            top, bot = slots[i], slots[i + 1]
            strands[top].right, strands[top].right_upper = idx, True
            strands[bot].right, strands[bot].right_upper = idx, False
            right_pairs[idx] = (top, bot)
            del slots[i:i + 2]
    return strands, left_pairs, right_pairs, crossings


def build_diagram(word: FrontWord, orientations: Sequence[int] | None = None) -> Diagram:
    """Trace the components of ``word`` and orient them.

    ``orientations`` holds one entry per traced component, +1 for the default
    orientation and -1 for its reverse; when omitted the word's directives
    decide.
    """
    validate_events(word.events)
    strands, left_pairs, right_pairs, raw_crossings = _strands(word.events)

    comp_of = [-1] * len(strands)
    dir_of = [0] * len(strands)
    traces: list[list[int]] = []         # strands in traversal order
    for ev in sorted(left_pairs):
        top, bot = left_pairs[ev]
        if comp_of[top] != -1:
            continue
        k = len(traces)
        order = []
        s, d = top, 1
        while True:
            comp_of[s], dir_of[s] = k, d
            order.append(s)
            if d == 1:
                a, b = right_pairs[strands[s].right]
            else:
                a, b = left_pairs[strands[s].left]
            s = b if s == a else a
            d = -d
            if s == top:
                break
        traces.append(order)

    ncomp = len(traces)
    if orientations is None:
        orient = [1] * ncomp
        for spec in word.directives:
            if spec.position > ncomp:
                raise OrientationError(
                    f"directive names component {spec.position}, word has {ncomp}")
            orient[spec.position - 1] = -1 if spec.reversed else 1
    else:
        orient = list(orientations)
        if len(orient) != ncomp:
            raise OrientationError(
                f"{len(orient)} orientations given for {ncomp} components")
        if any(o not in (1, -1) for o in orient):
            raise OrientationError("orientations must be +1 or -1")
    dir_of = [d * orient[comp_of[s]] for s, d in enumerate(dir_of)]

    names = [f"L{k + 1}" for k in range(ncomp)]
    for spec in word.directives:
        if spec.position <= ncomp:
            names[spec.position - 1] = spec.name
    if len(set(names)) != ncomp:
        raise OrientationError(f"component names collide: {names}")

    over_at = {idx: over for idx, over, _ in raw_crossings}
    components = []
    for k, order in enumerate(traces):
        if orient[k] == -1:
            order = order[::-1]
        path: list[tuple[int, str]] = []
        up = down = 0
        for s in order:
            st = strands[s]
            rightward = dir_of[s] == 1
            xs = st.crossings if rightward else st.crossings[::-1]
            for x in xs:
                path.append((x, "over" if over_at[x] == s else "under"))
            # the cusp at the far end of this strand
            if rightward:
                path.append((st.right, "right-cusp"))
                # descending into a right cusp along its upper branch
                if st.right_upper:
                    down += 1
                else:
                    up += 1
            else:
                path.append((st.left, "left-cusp"))
                if st.left_upper:
                    down += 1
                else:
                    up += 1
        components.append(Component(k, names[k], tuple(path), up, down))

    crossings = tuple(
        Crossing(idx, over, under, (comp_of[over], comp_of[under]),
                 1 if dir_of[over] == dir_of[under] else -1)
        for idx, over, under in raw_crossings
    )
    return Diagram(word, tuple(components), crossings, tuple(orient),
                   tuple(comp_of), tuple(dir_of))


def count_components_by_rank(word: FrontWord) -> int:
    """Component count as (#left cusps) - rank of the cusp pairing graph over GF(2).

    Vertices are left cusps; each right cusp joins the left cusps of its two
    strands.  Independent of the traversal in :func:`build_diagram`.
    """
    strands, left_pairs, right_pairs, _ = _strands(word.events)
    lefts = sorted(left_pairs)
    col = {ev: j for j, ev in enumerate(lefts)}
    rows = []
    for top, bot in right_pairs.values():
        a, b = col[strands[top].left], col[strands[bot].left]
        rows.append(0 if a == b else (1 << a) | (1 << b))
    rank = 0
    pivots: dict[int, int] = {}
    for r in rows:
        while r:
            hb = r.bit_length() - 1
            if hb in pivots:
                r ^= pivots[hb]
            else:
                pivots[hb] = r
                rank += 1
                break
    return len(lefts) - rank


# -- word constructions -----------------------------------------------------


def _word(events: Iterable[Event], directives: Sequence[ComponentSpec] = ()) -> FrontWord:
    evs = tuple(events)
    validate_events(evs)
    return FrontWord(evs, tuple(directives))


def connected_sum_words(first: FrontWord, second: FrontWord) -> FrontWord:
    """Legendrian connected sum at the last right cusp of ``first`` and the
    first left cusp of ``second``.  Directives are dropped."""
    if not first.events or not second.events:
        raise ValueError("connected sum needs two nonempty words")
    return _word(first.events[:-1] + second.events[1:])


def push_off_word(word: FrontWord) -> FrontWord:
    """Double every strand: each component gains a Legendrian push-off.

    Strand k becomes levels 2k-1 (the copy shifted up) and 2k.  Near each cusp
    the two copies cross once; each crossing becomes four.
    """
    out: list[Event] = []
    for ev in word.events:
        j = 2 * ev.level - 1
        if ev.kind == LEFT_CUSP:
            out += [Event("u", j), Event("u", j), Event("x", j + 1)]
        elif ev.kind == RIGHT_CUSP:
            out += [Event("x", j + 1), Event("a", j), Event("a", j)]
        else:
            out += [Event("x", j + 1), Event("x", j), Event("x", j + 2), Event("x", j + 1)]
    return _word(out)


def stabilize_word(word: FrontWord, position: int, level: int, zigzag: str = "z") -> FrontWord:
    """Insert a zigzag on the strand at ``level`` just before event ``position``.

    ``"z"`` inserts the pair below the strand, ``"s"`` above it; on a given
    strand the two shapes change the rotation number in opposite directions.
    """
    if zigzag == "z":
        extra = [Event("u", level + 1), Event("a", level)]
    elif zigzag == "s":
        extra = [Event("u", level), Event("a", level + 1)]
    else:
        raise ValueError("zigzag must be 'z' or 's'")
    evs = list(word.events)
    return _word(evs[:position] + extra + evs[position:], word.directives)


def _footprint(ev: Event) -> tuple[float, float]:
    """Interval of levels an event touches on its right (after) side."""
    if ev.kind == RIGHT_CUSP:
        return ev.level - 0.5, ev.level - 0.5
    return ev.level, ev.level + 1


def _before_footprint(ev: Event) -> tuple[float, float]:
    if ev.kind == LEFT_CUSP:
        return ev.level - 0.5, ev.level - 0.5
    return ev.level, ev.level + 1


def commute_events(word: FrontWord, k: int) -> FrontWord | None:
    """Swap events k and k+1 when they act on disjoint levels.

    Returns None when they interact.  Levels are renumbered so the result
    draws the same front.
    """
    e1, e2 = word.events[k], word.events[k + 1]
    lo1, hi1 = _footprint(e1)
    lo2, hi2 = _before_footprint(e2)
    if hi2 < lo1:          # e2 lies above e1
        n2 = e2
        n1 = Event(e1.kind, e1.level + _delta(e2.kind))
    elif lo2 > hi1:        # e2 lies below e1
        n2 = Event(e2.kind, e2.level - _delta(e1.kind))
        n1 = e1
    else:
        return None
    evs = list(word.events)
    evs[k], evs[k + 1] = n2, n1
    return _word(evs, word.directives)
