from fractions import Fraction

from hypothesis import strategies as st

# Filled by test_acceptance.py; printed at the end of every run that collected it.
ACCEPTANCE_RESULTS = {}


@st.composite
def plane_points(draw, max_den=60, lo=-4, hi=4):
    """Rational points of the plane x + y + z = 1."""
    q1 = draw(st.integers(1, max_den))
    q2 = draw(st.integers(1, max_den))
    x = Fraction(draw(st.integers(lo * q1, hi * q1)), q1)
    y = Fraction(draw(st.integers(lo * q2, hi * q2)), q2)
    return (x, y, 1 - x - y)


@st.composite
def d_points(draw, max_den=60):
    """Rational points of the fundamental domain, a >= b >= c >= 0."""
    q = draw(st.integers(1, max_den))
    c = draw(st.integers(0, q // 3))
    b = draw(st.integers(c, (q - c) // 2))
    return tuple(Fraction(n, q) for n in (q - b - c, b, c))


small_ints = st.integers(-6, 6)
int_matrices = st.lists(small_ints, min_size=9, max_size=9)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(ACCEPTANCE_RESULTS[key])
