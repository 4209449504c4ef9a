from fractions import Fraction

from hypothesis import strategies as st

from flatjet.jets import Jet
from flatjet.scalar import Scalar

small_fractions = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def scalars(draw, allow_zero=True):
    re = draw(small_fractions)
    im = draw(st.one_of(st.just(Fraction(0)), small_fractions))
    s = Scalar(re, im)
    if not allow_zero and not s:
        s = Scalar(1, im)
    return s


@st.composite
def jets(draw, dim=2, N=None, max_terms=6, max_N=8, unit=False):
    if N is None:
        N = draw(st.integers(0, max_N))
    n_terms = draw(st.integers(0, max_terms))
    coeffs = {}
    for _ in range(n_terms):
        deg = draw(st.integers(0, N))
        parts = draw(st.lists(st.integers(0, deg), min_size=dim - 1, max_size=dim - 1).map(sorted))
        cuts = [0, *parts, deg]
        gamma = tuple(cuts[i + 1] - cuts[i] for i in range(dim))
        coeffs[gamma] = draw(scalars())
    if unit:
        coeffs[(0,) * dim] = draw(scalars(allow_zero=False))
    return Jet(dim, N, coeffs)


# -- acceptance summary -----------------------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
