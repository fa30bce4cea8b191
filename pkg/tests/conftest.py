from fractions import Fraction

import pytest
from hypothesis import strategies as st

from qplane.funcspace import INF, Interval, StepFunction
from qplane.spectral import SpectralSet

THREE_BANDS = [("13/25", "11/20"), ("3/5", "31/50"), ("7/10", "18/25")]


@pytest.fixture
def full_half():
    return SpectralSet.full("1/2")


@pytest.fixture
def full_three_quarters():
    return SpectralSet.full("3/4")


@pytest.fixture
def three_bands():
    return SpectralSet.generic("1/2", THREE_BANDS)


@pytest.fixture
def one_band():
    return SpectralSet.generic("1/2", [("3/5", "7/10")])


small_rationals = st.fractions(min_value=Fraction(1, 16), max_value=4, max_denominator=16)
values = st.integers(-3, 3).map(Fraction)


@st.composite
def step_functions(draw, vanish_at_ends: bool = False):
    """Step functions with up to three pieces on rational breakpoints."""
    pts = sorted(set(draw(st.lists(small_rationals, min_size=2, max_size=4))))
    if len(pts) < 2:
        pts = [Fraction(1, 2), Fraction(2)]
    pieces = []
    for lo, hi in zip(pts, pts[1:]):
        pieces.append((Interval(lo, hi, draw(st.booleans()), False), draw(values)))
    if not vanish_at_ends:
        pieces.append((Interval(0, pts[0], True, False), draw(values)))
        pieces.append((Interval(pts[-1], INF, True, False), draw(values)))
    return StepFunction(tuple(pieces))
