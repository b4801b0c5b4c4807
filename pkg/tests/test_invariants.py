from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import FIXTURES, knot_words, words
from legendrian_surgery.front import (
    FrontWord,
    build_diagram,
    connected_sum_words,
    parse_front_word,
    push_off_word,
    stabilize_word,
)
from legendrian_surgery.invariants import (
    ClassicalData,
    classical_data,
    cusp_counts,
    linking_number,
    rotation,
    thurston_bennequin,
    writhe,
)
from oracles import restrict_to_component

UNKNOT = "u1 a1"
RIGHT_TREFOIL = "u1 u1 x2 x2 x2 a1 a1"
LEFT_TREFOIL = "u1 u2 x1 x1 x2 x2 a3 a1"
FIGURE_EIGHT = " ".join(restrict_to_component("u1 u3 x2 x2 x1 x3 x1 a2 u2 x1 x3 a2 a1", 0))


def diagram(text, orientations=None):
    return build_diagram(FrontWord.from_tokens(text), orientations)


def fixture_data(name):
    return classical_data(build_diagram(parse_front_word((FIXTURES / f"{name}.front").read_text())))


@pytest.mark.parametrize("text, tb", [
    (UNKNOT, -1), (RIGHT_TREFOIL, 1), (LEFT_TREFOIL, -6), (FIGURE_EIGHT, -3)])
def test_anchor_tb(text, tb):
    assert thurston_bennequin(diagram(text), 0) == tb


def test_unknot_values():
    d = diagram(UNKNOT)
    assert writhe(d, 0) == 0
    assert cusp_counts(d, 0) == (1, 1)
    assert rotation(d, 0) == 0


def test_right_trefoil_values():
    d = diagram(RIGHT_TREFOIL)
    assert writhe(d, 0) == 3
    assert sum(cusp_counts(d, 0)) == 4
    assert rotation(d, 0) == 0


def test_figure_eight_values():
    d = diagram(FIGURE_EIGHT)
    assert writhe(d, 0) - Fraction(sum(cusp_counts(d, 0)), 2) == -3
    assert rotation(d, 0) == 0


def test_values_are_fractions():
    d = diagram(RIGHT_TREFOIL)
    assert isinstance(thurston_bennequin(d, 0), Fraction)
    assert isinstance(rotation(d, 0), Fraction)


def test_unknown_component():
    d = diagram(UNKNOT)
    with pytest.raises(KeyError):
        writhe(d, 1)
    with pytest.raises(KeyError):
        thurston_bennequin(d, "L9")


def test_self_linking_rejected():
    d = diagram("u1 a1 u1 a1")
    with pytest.raises(ValueError):
        linking_number(d, 0, 0)


def test_split_link():
    data = classical_data(diagram("u1 a1 u1 a1"))
    assert data.tb == {"L1": -1, "L2": -1}
    assert data.rot == {"L1": 0, "L2": 0}
    assert data.linking("L1", "L2") == 0


@pytest.mark.parametrize("name, tb, rot, lk", [
    ("fig3", (0, 0), (-1, -1), 0),
    ("fig4", (-3, -1), (0, 0), 1),
    ("fig6", (1, 1), (0, 0), 4),
    ("fig7", (-6, -1), (1, 0), 1),
    ("fig8", (-6, -1), (1, 0), 0),
    ("stein", (-1, -1), (0, 0), 1),
])
def test_fixture_classical_data(name, tb, rot, lk):
    data = fixture_data(name)
    a, b = data.names
    assert (data.tb[a], data.tb[b]) == tb
    assert (data.rot[a], data.rot[b]) == rot
    assert data.linking(a, b) == data.linking(b, a) == lk


@given(knot_words())
def test_parity(tokens):
    d = diagram(tokens)
    value = thurston_bennequin(d, 0) + rotation(d, 0)
    assert value.denominator == 1 and value % 2 == 1


@given(words(), st.data())
def test_orientation_reversal(tokens, data):
    base = diagram(tokens)
    n = len(base.components)
    flips = data.draw(st.lists(st.sampled_from([1, -1]), min_size=n, max_size=n))
    other = diagram(tokens, flips)
    for i in range(n):
        assert thurston_bennequin(other, i) == thurston_bennequin(base, i)
        assert rotation(other, i) == flips[i] * rotation(base, i)
        for j in range(n):
            if i != j:
                assert linking_number(other, i, j) == flips[i] * flips[j] * linking_number(base, i, j)


@given(words())
def test_linking_symmetric_and_integral(tokens):
    data = classical_data(diagram(tokens))
    for (a, b), v in data.lk.items():
        assert data.lk[(b, a)] == v
        assert v.denominator == 1


@given(knot_words(max_events=16))
def test_push_off_linking_equals_tb(tokens):
    w = FrontWord.from_tokens(tokens)
    tb = thurston_bennequin(build_diagram(w), 0)
    d = build_diagram(push_off_word(w))
    assert linking_number(d, 0, 1) == tb
    assert thurston_bennequin(d, 0) == thurston_bennequin(d, 1) == tb


@given(knot_words(max_events=14), knot_words(max_events=14))
def test_connected_sum_words(t1, t2):
    w1, w2 = FrontWord.from_tokens(t1), FrontWord.from_tokens(t2)
    d = build_diagram(connected_sum_words(w1, w2))
    d1, d2 = build_diagram(w1), build_diagram(w2)
    assert len(d.components) == 1
    assert thurston_bennequin(d, 0) == thurston_bennequin(d1, 0) + thurston_bennequin(d2, 0) + 1
    # the second summand inherits whichever orientation is compatible
    r1, r2 = rotation(d1, 0), rotation(d2, 0)
    assert rotation(d, 0) in (r1 + r2, r1 - r2)


def test_connected_sum_of_stabilized_trefoils():
    down = stabilize_word(FrontWord.from_tokens(RIGHT_TREFOIL), 1, 1, "s")
    d = build_diagram(connected_sum_words(down, down))
    assert (thurston_bennequin(d, 0), rotation(d, 0)) == (1, -2)


@given(knot_words(), st.data())
def test_stabilization_words(tokens, data):
    w = FrontWord.from_tokens(tokens)
    base = build_diagram(w)
    pos = data.draw(st.integers(1, len(w) - 1))
    strands = sum({"u": 2, "a": -2, "x": 0}[e.kind] for e in w.events[:pos])
    level = data.draw(st.integers(1, strands))
    z = build_diagram(stabilize_word(w, pos, level, "z"))
    s = build_diagram(stabilize_word(w, pos, level, "s"))
    for d in (z, s):
        assert thurston_bennequin(d, 0) == thurston_bennequin(base, 0) - 1
    assert {rotation(z, 0) - rotation(base, 0), rotation(s, 0) - rotation(base, 0)} == {1, -1}


def test_down_stabilized_trefoil():
    w = stabilize_word(FrontWord.from_tokens(RIGHT_TREFOIL), 1, 1, "s")
    d = build_diagram(w)
    assert (thurston_bennequin(d, 0), rotation(d, 0)) == (0, -1)


def test_from_values():
    data = ClassicalData.from_values({"A": -1, "B": 1}, {"A": 0, "B": 0}, {("A", "B"): 3})
    assert data.linking("B", "A") == 3
    assert data.writhe["B"] == 2
    with pytest.raises(ValueError):
        ClassicalData(("A", "B"), {}, {}, {("A", "B"): Fraction(1), ("B", "A"): Fraction(2)}, {}, {})
