import math
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import XY, S
from tangentcone.cone import (
    ConeQuery,
    cone_membership_numeric,
    cone_membership_puiseux,
    cone_scan,
    initial_form_cone,
    plane_curve_cone,
    sphere_grid,
)
from tangentcone.poly import Polynomial
from tangentcone.semialg import Atom, SemialgebraicSet, eval_real

coef = st.integers(-3, 3)
RELS = ("=", "<=", ">", "!=")


@st.composite
def through_origin(draw):
    terms = {}
    for _ in range(draw(st.integers(1, 3))):
        a = draw(st.integers(0, 3))
        b = draw(st.integers(0, 3 - a))
        if a + b:
            terms[(a, b)] = draw(coef)
    f = Polynomial(2, terms)
    if f.is_zero():
        f = Polynomial.var(2, 1)
    return f


@st.composite
def plane_sets(draw):
    f = draw(through_origin())
    return SemialgebraicSet(Atom(f, draw(st.sampled_from(RELS))), XY)


GRID = sphere_grid(2, 8)
FAST = dict(budget=3000)


def numeric_supported(X, dirs=GRID):
    return {y for y in dirs if cone_membership_numeric(ConeQuery(X, (), y), **FAST).supported}


@settings(max_examples=12)
@given(plane_sets(), plane_sets())
def test_monotone_under_inclusion(X, extra):
    Y = X.union(extra)
    assert numeric_supported(X) <= numeric_supported(Y)


@settings(max_examples=12)
@given(plane_sets(), plane_sets())
def test_union_is_union_of_cones(X, Y):
    assert numeric_supported(X.union(Y)) == numeric_supported(X) | numeric_supported(Y)


@settings(max_examples=12)
@given(plane_sets(), plane_sets())
def test_intersection_is_contained(X, Y):
    sx = cone_scan(X, (), 8, ("puiseux", "numeric"), budget=3000)
    sy = cone_scan(Y, (), 8, ("puiseux", "numeric"), budget=3000)
    sxy = cone_scan(X.intersection(Y), (), 8, ("puiseux", "numeric"), budget=3000)
    for ex, ey, exy in zip(sx.entries, sy.entries, sxy.entries):
        if not (ex.combined.determinate and ey.combined.determinate and exy.combined.determinate):
            continue
        if exy.combined.supported:
            assert ex.combined.supported and ey.combined.supported


def test_intersection_can_be_strict():
    up, down = S("y - x^2 = 0"), S("y + x^2 = 0")
    both = up.intersection(down)
    scan = lambda X: set(cone_scan(X, (), 8, ("puiseux", "numeric")).supported())
    assert scan(up) == scan(down) == {(1, 0), (-1, 0)}
    assert scan(both) == set()
    assert cone_membership_puiseux(ConeQuery(both, (), (0, 0))).supported


@settings(max_examples=25)
@given(through_origin(), st.sampled_from(GRID), st.fractions(Fraction(1, 5), 7, max_denominator=5))
def test_scaling_invariance(f, y, lam):
    X = SemialgebraicSet(Atom(f, "="), XY)
    a = cone_membership_puiseux(ConeQuery(X, (), y))
    b = cone_membership_puiseux(ConeQuery(X, (), tuple(lam * c for c in y)))
    if a.determinate and b.determinate:
        assert a.supported == b.supported


@settings(max_examples=20)
@given(through_origin(), st.sampled_from(GRID))
def test_engine_soundness(f, y):
    X = SemialgebraicSet(Atom(f, "="), XY)
    pu = cone_membership_puiseux(ConeQuery(X, (), y))
    if pu.supported:
        assert cone_membership_numeric(ConeQuery(X, (), y)).supported
    R = plane_curve_cone(f, ())
    if R.contains(y):
        assert pu.supported
    if pu.supported or R.contains(y):
        assert eval_real(initial_form_cone(f, ()), y)


def test_unsupported_directions_have_open_neighbourhoods(cusp):
    coarse = cone_scan(cusp, (), 8, ("puiseux",))
    fine = cone_scan(cusp, (), 64, ("puiseux",))
    for e in coarse.entries:
        v = e.combined
        if v.status != "unsupported" or not v.certified:
            continue
        a = math.atan2(float(e.direction[1]), float(e.direction[0]))
        for f in fine.entries:
            b = math.atan2(float(f.direction[1]), float(f.direction[0]))
            gap = abs((a - b + math.pi) % (2 * math.pi) - math.pi)
            if gap < math.pi / 8:
                assert not (f.combined.supported and f.combined.certified)
