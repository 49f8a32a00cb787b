from fractions import Fraction

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from tangentcone.parsing import parse_polynomial
from tangentcone.poly import Polynomial
from tangentcone.semialg import parse_set

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

XY = ("x", "y")
XYZ = ("x", "y", "z")


def P(text, names=XY):
    return parse_polynomial(text, names)[0]


def S(text, names=XY):
    return parse_set(text, names)


def F(*vals):
    return tuple(Fraction(v) for v in vals)


small_q = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def polynomials(draw, nvars=2, max_terms=5, max_deg=3):
    k = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(k):
        exp = tuple(draw(st.integers(0, max_deg)) for _ in range(nvars))
        terms[exp] = draw(small_q)
    return Polynomial(nvars, terms)


@pytest.fixture
def cusp():
    return S("x^3 - y^2 = 0")


@pytest.fixture
def surface():
    return S("x^3 - y^2 - z^2 = 0", XYZ)


# -- acceptance summary lines ---------------------------------------------------

_ACCEPTANCE: list = []


@pytest.fixture
def acceptance_line():
    def record(label: str, ok: bool, elapsed: float, limit: float | None, detail: str = ""):
        timing = f"{elapsed:.2f}s" + (f" (limit {limit:g}s)" if limit else "")
        line = f"{label}: {'PASS' if ok else 'FAIL'}  {timing}  {detail}".rstrip()
        _ACCEPTANCE.append(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
