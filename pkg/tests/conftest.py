import os
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from lusinlp import IntervalSet

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def interval_sets(draw, denom=96, max_pieces=5):
    k = draw(st.integers(0, 2 * max_pieces))
    cuts = sorted(set(draw(st.lists(st.integers(0, denom), min_size=k, max_size=k))))
    pairs = [(Fraction(a, denom), Fraction(b, denom)) for a, b in zip(cuts[::2], cuts[1::2])]
    return IntervalSet.of(pairs)


positive_eps = st.fractions(min_value=Fraction(1, 1000), max_value=Fraction(1, 2))


_ACCEPTANCE: dict = {}


@pytest.fixture
def acceptance_record():
    def record(number: int, title: str, passed: bool, seconds: float, detail: str = ""):
        _ACCEPTANCE[number] = (title, passed, seconds, detail)
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_ACCEPTANCE):
        title, ok, secs, detail = _ACCEPTANCE[k]
        tag = "PASS" if ok else "FAIL"
        extra = f" [{detail}]" if detail else ""
        terminalreporter.write_line(f"criterion {k:2d} {tag}  {title} ({secs:.2f}s){extra}")
