from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from conftest import P
from tangentcone.logic import Indeterminate
from tangentcone.puiseux import (
    EXACT,
    INF,
    Ball,
    Direction,
    NotInValuationRing,
    PuiseuxPoint,
    PuiseuxSeries,
    UnboundedCurve,
    ball_contains,
    direction,
    parse_series,
    ps_arith,
    ps_limit,
    residue,
    risometry_check,
    rvhat,
    truncation_order,
    valuation,
    vhat,
)

ps = parse_series
exps = st.fractions(min_value=0, max_value=4, max_denominator=3)
nz = st.fractions(-4, 4, max_denominator=3).filter(bool)


@st.composite
def series(draw, min_exp=0, allow_zero=True):
    k = draw(st.integers(0 if allow_zero else 1, 3))
    terms = [(draw(exps) + min_exp, draw(nz)) for _ in range(k)]
    s = PuiseuxSeries(terms)
    if not allow_zero:
        assume(not s.is_zero())
    return s


def pt(*coords):
    return PuiseuxPoint(list(coords))


def test_arith_examples():
    assert ps_arith("add", ps("t"), ps("-t")).is_zero()
    assert ps_arith("mul", ps("t^(1/2)"), ps("t^(1/2)")) == ps("t")
    assert ps_arith("div", ps("t^2"), ps("t")) == ps("t")


def test_literals_round_trip():
    for text in ["3*t^(1/2) + t - 2*t^(5/2) + O(t^8)", "-t^(-1) + (1/3)", "0", "O(t^2)", "(2/3)*t^(7/4)"]:
        s = ps(text)
        assert ps(s.to_literal()) == s
    assert ps("t + t^2").is_exact and ps("t").prec == EXACT
    assert not ps("t + O(t^3)").is_exact


def test_valuation_examples():
    assert valuation(ps("3*t^(1/2) + t")) == Fraction(1, 2)
    assert valuation(ps("0")) == INF
    assert valuation(ps("t") * ps("2*t^3")) == 4
    assert valuation(ps("O(t^3)")).truncated


def test_vhat_examples():
    assert vhat(pt("t", "t^2")) == 1
    assert vhat(pt("0", "t^(3/2)")) == Fraction(3, 2)
    assert vhat(pt("0", "0")) == INF
    with pytest.raises(Indeterminate):
        vhat(pt("O(t^2)", "t^3"))


def test_residue_examples():
    assert residue(ps("2 + t")) == 2
    assert residue(ps("t^(1/2)")) == 0
    with pytest.raises(NotInValuationRing):
        residue(ps("t^(-1)"))


def test_rvhat_examples():
    r = rvhat(pt("t", "t^2"))
    assert r.gamma == 1 and r.leading_residue == (1, 0)
    assert rvhat(pt("t + t^3", "t^2 - t^4")) == rvhat(pt("t", "t^2"))
    assert rvhat(pt("0", "0")).is_zero


def test_direction_examples():
    assert direction(pt("t", "t^2")) == Direction((1, 0))
    assert direction(pt("2*t", "3*t")) == Direction((1, Fraction(3, 2)))
    assert direction(pt("t^2", "5*t^2")) == Direction((1, 5))
    with pytest.raises(ValueError):
        direction(pt("0", "0"))


def test_ball_examples():
    origin = pt("0", "0")
    assert ball_contains(Ball(origin, 0, "open"), pt("t", "t^2")).is_true
    assert ball_contains(Ball(origin, 0, "open"), pt("1 + t", "0")).is_false
    assert ball_contains(Ball(origin, 1, "closed"), pt("t", "t")).is_true
    assert ball_contains(Ball(origin, 1, "open"), pt("t + O(t^2)", "0")).is_false
    assert ball_contains(Ball(origin, 1, "open"), pt("O(t^2)", "0")).is_true
    assert ball_contains(Ball(origin, 3, "open"), pt("O(t^2)", "0")).is_unknown


def test_limit_examples():
    assert ps_limit(pt("t", "1 + t^2")) == (0, 1)
    assert ps_limit(pt("t^(1/2)", "t^(3/2)")) == (0, 0)
    with pytest.raises(UnboundedCurve):
        ps_limit(pt("t^(-1)", "0"))


def test_risometry_examples():
    n = ("x", "y")
    ident = (P("x"), P("y"))
    shear = (P("x"), P("y + x^2"))
    swap = (P("y"), P("x"))
    pairs = [(pt("t", "t^2"), pt("2*t", "t^3")), (pt("t^(1/2)", "0"), pt("0", "t"))]
    assert risometry_check(ident, pairs).ok
    assert risometry_check(shear, pairs).ok
    assert not risometry_check(swap, [(pt("t", "0"), pt("0", "0"))]).ok
    assert n  # names only document the maps above


def test_inverse_and_truncation():
    a = ps("1 + t")
    inv = a.inverse(order=5)
    assert inv.prec == 5
    assert (a * inv).truncate(5) == ps("1 + O(t^5)")
    with truncation_order(3):
        assert (ps("1") / a).prec == 3
    with pytest.raises(Indeterminate):
        ps("O(t^2)").inverse()
    assert ps("2*t^3").inverse() == ps("(1/2)*t^(-3)")


def test_sign_and_indeterminate_sign():
    assert ps("-t + 5*t^2").sign() == -1
    assert ps("0").sign() == 0
    with pytest.raises(Indeterminate):
        ps("O(t)").sign()


# -- valued field axioms -----------------------------------------------------

@given(series(allow_zero=False), series(allow_zero=False))
def test_valuation_multiplicative(a, b):
    assert valuation(a * b) == valuation(a) + valuation(b)


@given(series(), series())
def test_ultrametric(a, b):
    s = a + b
    va, vb = valuation(a), valuation(b)
    assert not valuation(s) < min(va, vb)
    if va != vb:
        assert valuation(s) == min(va, vb)


@given(st.lists(series(), min_size=2, max_size=2), st.lists(series(), min_size=2, max_size=2))
def test_rv_equivalence(xs, ys):
    x, y = PuiseuxPoint(xs), PuiseuxPoint(ys)
    same = rvhat(x) == rvhat(y)
    if x.is_zero() and y.is_zero():
        assert same
    elif x.is_zero():
        assert not same
    else:
        assert same == (vhat(x - y) > vhat(x))


@given(st.lists(series(), min_size=2, max_size=2), series(allow_zero=False))
def test_direction_invariance(xs, lam):
    x = PuiseuxPoint(xs)
    assume(not x.is_zero())
    unit = PuiseuxSeries([(0, abs(lam.lead()[1]))] + [(e + 1, c) for e, c in lam.terms])
    assert direction(x.scale(unit)) == direction(x)
    assert direction(x.scale(-unit)) == direction(x)


@given(series(), series())
def test_limit_is_additive(a, b):
    assert ps_limit(PuiseuxPoint([a + b])) == (ps_limit(PuiseuxPoint([a]))[0] + ps_limit(PuiseuxPoint([b]))[0],)


@given(series(min_exp=1, allow_zero=False), series(min_exp=1), series(min_exp=1), series(min_exp=1))
def test_shear_is_risometry_and_isometry(a, b, c, d):
    shear = (P("x"), P("y + x^2"))
    x, y = PuiseuxPoint([a, b]), PuiseuxPoint([c, d])
    rep = risometry_check(shear, [(x, y)])
    assert rep.ok and rep.isometry_ok
