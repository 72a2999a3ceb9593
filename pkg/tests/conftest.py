from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from supergeom.superalg import Chart, Coordinate, Derivation, Polynomial

FIXTURES = Path(__file__).parent / "fixtures"

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# x, y even; s, t odd; u even
CHART = Chart([Coordinate("x", 0), Coordinate("s", 1), Coordinate("y", 0), Coordinate("t", 1), Coordinate("u", 0)])

coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4).filter(lambda c: c != 0)
monomials = st.lists(st.integers(0, len(CHART) - 1), max_size=3).map(tuple)


@st.composite
def polynomials(draw, parity=None, chart=CHART):
    terms = draw(st.dictionaries(monomials, coeffs, max_size=4))
    p = Polynomial(chart, terms)
    if parity is None:
        return p
    # keep only terms of the requested parity
    keep = {m: c for m, c in p.terms if sum(chart[i].parity for i in m) % 2 == parity}
    return Polynomial(chart, keep)


parities = st.sampled_from([0, 1])


@st.composite
def derivations(draw, parity=None, chart=CHART):
    parity = draw(parities) if parity is None else parity
    comps = [draw(polynomials(parity=(c.parity + parity) % 2, chart=chart)) for c in chart]
    return Derivation(chart, comps, parity)


@pytest.fixture
def fixtures_dir():
    return FIXTURES


def read_fixture(name: str) -> str:
    return (FIXTURES / name).read_text()


def F(x) -> Fraction:
    return Fraction(x)
