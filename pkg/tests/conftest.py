import random
from pathlib import Path

from hypothesis import settings, strategies as st

from legendrian_surgery.cli import fixtures_dir
from oracles import random_knot_word, random_word

settings.register_profile("default", deadline=None)
settings.load_profile("default")

FIXTURES = Path(fixtures_dir())

seeds = st.integers(min_value=0, max_value=2**32 - 1)


@st.composite
def words(draw, max_events=24):
    return random_word(random.Random(draw(seeds)), max_events)


@st.composite
def knot_words(draw, max_events=24):
    return random_knot_word(random.Random(draw(seeds)), max_events)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
