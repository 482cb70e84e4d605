from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from qhp.polycore import Poly

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

Y_SET = (Fraction(-2), Fraction(-1, 2), Fraction(1, 3), Fraction(1), Fraction(5, 2))

rationals = st.builds(Fraction, st.integers(-12, 12), st.integers(1, 6))
nonzero_rationals = rationals.filter(lambda q: q != 0)


@st.composite
def polys(draw, max_degree=10):
    coeffs = draw(st.lists(rationals, min_size=0, max_size=max_degree + 1))
    return Poly(tuple(coeffs))


_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_log():
    """Collects one pass/fail line per criterion for the terminal summary."""
    return _ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
