from fractions import Fraction

import sympy
from hypothesis import given
from hypothesis import strategies as st

from tangentcone.realroots import (
    RealAlgebraic,
    count_roots,
    isolate_real_roots,
    normalize,
    pdivmod,
    pgcd,
    peval,
    sign_at_root,
    squarefree,
)

s = sympy.Symbol("s")
coeffs = st.lists(st.integers(-6, 6), min_size=2, max_size=6).filter(lambda c: any(c[1:]))


def sym(c):
    return sum((sympy.Integer(v) * s**i for i, v in enumerate(c)), sympy.Integer(0))


def test_simple_roots():
    roots = isolate_real_roots([Fraction(-2), 0, Fraction(1)])  # s^2 - 2
    assert len(roots) == 2
    assert abs(float(roots[0]) + 2**0.5) < 1e-9 and abs(float(roots[1]) - 2**0.5) < 1e-9
    assert not roots[0].is_rational()


def test_rational_root_detected():
    (r,) = isolate_real_roots([Fraction(-3), Fraction(2)])
    assert r.is_rational() and r.value == Fraction(3, 2)


def test_no_real_roots():
    assert isolate_real_roots([1, 0, 1]) == []


def test_division_identity():
    a = normalize([1, 2, 3, 4])
    b = normalize([1, 1])
    q, r = pdivmod(a, b)
    assert len(r) < len(b)
    x = Fraction(7, 3)
    assert peval(a, x) == peval(q, x) * peval(b, x) + peval(r, x)


def test_squarefree_and_gcd():
    p = normalize([-1, 0, 1])  # (s-1)(s+1)
    sq = normalize([1, -2, 1])  # (s-1)^2
    g = pgcd(p, sq)
    assert len(g) == 2 and peval(g, 1) == 0
    sf = squarefree([Fraction(c) for c in sympy.Poly((s - 1) ** 3 * (s + 2), s).all_coeffs()[::-1]])
    assert len(sf) == 3


@given(coeffs)
def test_root_count_matches_sympy(c):
    want = sorted(set(sympy.real_roots(sym(c))), key=lambda r: float(r))
    got = isolate_real_roots([Fraction(v) for v in c])
    assert len(got) == len(want)
    for r, w in zip(got, want):
        assert abs(float(r) - float(w)) < 1e-8


@given(coeffs, st.fractions(-5, 5, max_denominator=3), st.fractions(-5, 5, max_denominator=3))
def test_count_roots_interval(c, a, b):
    lo, hi = min(a, b), max(a, b)
    if lo == hi:
        return
    p = squarefree([Fraction(v) for v in c])
    if peval(p, lo) == 0 or peval(p, hi) == 0:
        return
    want = sum(1 for r in set(sympy.real_roots(sym(c))) if lo < r < hi)
    assert count_roots(p, lo, hi) == want


def test_sign_at_root():
    (neg, pos) = isolate_real_roots([Fraction(-2), 0, Fraction(1)])
    assert sign_at_root([0, 1], pos) == 1
    assert sign_at_root([0, 1], neg) == -1
    assert sign_at_root([-2, 0, 1], pos) == 0


def test_ordering_and_equality():
    roots = isolate_real_roots([Fraction(-2), 0, Fraction(1)])
    assert roots[0] < RealAlgebraic.from_rational(0) < roots[1]
    assert -roots[0] == roots[1]
