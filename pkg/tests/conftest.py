from fractions import Fraction

from hypothesis import settings, strategies as st

from lewis_hecke.core import IntMat2

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")

small_int = st.integers(min_value=-50, max_value=50)
int_mats = st.builds(IntMat2, small_int, small_int, small_int, small_int)
nonsingular = int_mats.filter(lambda A: A.det != 0)

# GL(2, Z) elements as short words in the generators
from lewis_hecke.core import M, Q, T, T_INV  # noqa: E402

LETTERS = [T, T_INV, M, Q, Q.inverse()]


@st.composite
def gl2_words(draw, max_len=8):
    g = IntMat2(1, 0, 0, 1)
    for k in draw(st.lists(st.integers(0, len(LETTERS) - 1), max_size=max_len)):
        g = g * LETTERS[k]
    return g


positive_rationals = st.builds(
    Fraction, st.integers(min_value=1, max_value=400), st.integers(min_value=1, max_value=400)
)
unit_rationals = st.builds(
    lambda q, p: Fraction(p % q, q), st.integers(min_value=2, max_value=300), st.integers(min_value=1, max_value=10**6)
).filter(lambda x: x > 0)


# PASS/FAIL lines from test_acceptance.py, echoed in the terminal summary so
# they are visible without -s
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split(":")[0].split()[-1])):
            terminalreporter.write_line(line)
