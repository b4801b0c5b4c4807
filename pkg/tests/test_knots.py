from fractions import Fraction

import pytest

from legendrian_surgery.knots import KnotRecord, KnotTableError, default_knot_table, parse_knot_table


def test_bundled_table():
    t = default_knot_table()
    assert t["unknot"] == KnotRecord("unknot", Fraction(0), 0, True, -1)
    assert (t["right-trefoil"].tau, t["right-trefoil"].genus, t["right-trefoil"].l_space_knot) == (1, 1, True)
    assert (t["left-trefoil"].tau, t["left-trefoil"].l_space_knot) == (-1, False)
    assert (t["figure-eight"].tau, t["figure-eight"].genus) == (0, 1)


def test_l_space_records_have_tau_equal_genus():
    for rec in default_knot_table().values():
        if rec.l_space_knot:
            assert rec.tau == rec.genus


@pytest.mark.parametrize("text", [
    "k 1 1\n",
    "k x 1 true\n",
    "k 1 1 maybe\n",
    "k 1 -1 false\n",
    "k 0 1 true\n",                  # L-space knot with tau != genus
    "k 1 1 true\nk 1 1 true\n",
])
def test_bad_tables(text):
    with pytest.raises(KnotTableError):
        parse_knot_table(text)


def test_comments_and_optional_column():
    t = parse_knot_table("# header\n\nk 2 2 true  # note\n")
    assert t["k"].tb_max is None
