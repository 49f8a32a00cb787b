from fractions import Fraction

import pytest

from conftest import XY, XYZ, P, S
from tangentcone.cone import (
    INDETERMINATE,
    SUPPORTED,
    UNSUPPORTED,
    ConeQuery,
    Ray,
    RaySet,
    clear_cache,
    combine_verdicts,
    cone_membership_initial,
    cone_membership_numeric,
    cone_membership_puiseux,
    cone_scan,
    deformation_slice_check,
    exact_cone,
    initial_form_cone,
    initial_form_zero_subspace,
    plane_curve_cone,
    sign_certificate,
    sphere_grid,
)
from tangentcone.cone.types import ConeVerdict
from tangentcone.puiseux import PuiseuxPoint
from tangentcone.semialg import eval_puiseux, eval_real


def q(X, y, p=()):
    return ConeQuery(X, p, y)


def rays(R):
    return sorted(r.rational_vector() for r in R.rays)


# -- numeric ------------------------------------------------------------------

def test_numeric_examples(cusp):
    v = cone_membership_numeric(q(cusp, (1, 0)))
    assert v.status == SUPPORTED and v.witness["kind"] == "sequence"
    assert cone_membership_numeric(q(cusp, (-1, 0))).status == UNSUPPORTED
    plane = S("0 = 0")
    for y in [(1, 0), (-3, 2), (0, -1)]:
        assert cone_membership_numeric(q(plane, y)).supported


def test_numeric_witness_steps_converge(cusp):
    v = cone_membership_numeric(q(cusp, (1, 0)))
    steps = v.witness["steps"]
    for st in steps:
        x = st["x"]
        assert eval_real(cusp, x)
        assert st["residual"] < st["eps"]


def test_numeric_empty_set_is_certified():
    v = cone_membership_numeric(q(S("1 = 0"), (1, 0)))
    assert v.status == UNSUPPORTED and v.certified


def test_numeric_is_deterministic(cusp):
    a = cone_membership_numeric(q(cusp, (1, 0)), seed=4).to_json()
    clear_cache()
    b = cone_membership_numeric(q(cusp, (1, 0)), seed=4).to_json()
    assert a == b


# -- exact curves ---------------------------------------------------------------

def test_puiseux_examples(cusp):
    v = cone_membership_puiseux(q(cusp, (1, 0)))
    assert v.supported and v.certified and v.witness["curve"] == "(t, t^(3/2))"
    curve = PuiseuxPoint(["t", "t^(3/2)"])
    assert eval_puiseux(cusp, curve).is_true
    for y in [(0, 1), (-1, 0), (1, 1)]:
        v = cone_membership_puiseux(q(cusp, y))
        assert v.status == UNSUPPORTED and v.certified
    half_line = S("x >= 0", ("x",))
    v = cone_membership_puiseux(q(half_line, (1,)))
    assert v.supported and v.witness["curve"] == "(t)"


def test_puiseux_zero_direction(cusp):
    assert cone_membership_puiseux(q(cusp, (0, 0))).supported
    assert not cone_membership_puiseux(q(cusp, (0, 0), p=(1, 0))).supported


def test_puiseux_irrational_branch_witness():
    X = S("y^2 - 2*x^2 = 0")
    v = cone_membership_puiseux(q(X, (1, 1)))
    assert v.status == UNSUPPORTED
    v = cone_membership_puiseux(q(S("y^2 - x^2 - x^3 = 0"), (1, 1)))
    assert v.supported and v.witness["kind"] in ("branch", "curve")


def test_puiseux_surface():
    X = S("x^3 - y^2 - z^2 = 0", XYZ)
    assert cone_membership_puiseux(q(X, (1, 0, 0))).supported
    for y in [(-1, 0, 0), (0, 1, 0), (1, 1, 0)]:
        v = cone_membership_puiseux(q(X, y))
        assert v.status == UNSUPPORTED and v.certified


def test_sign_certificate():
    # x^3 - y^2 along (0, 1): leading term -t^2 cannot cancel
    assert sign_certificate(P("x^3 - y^2"), (0, 1), 1) == -1


# -- plane curves -----------------------------------------------------------------

def test_plane_curve_examples():
    R = plane_curve_cone(P("x^3 - y^2"), ())
    assert rays(R) == [(1, 0)] and R.apex
    R = plane_curve_cone(P("y - x^2"), ())
    assert rays(R) == [(-1, 0), (1, 0)]
    R = plane_curve_cone(P("x^2 - y^2"), ())
    assert rays(R) == [(-1, -1), (-1, 1), (1, -1), (1, 1)]


def test_plane_curve_more():
    assert rays(plane_curve_cone(P("y^2 - x^4"), ())) == [(-1, 0), (1, 0)]
    assert rays(plane_curve_cone(P("y^2 - x^2 - x^3"), ())) == [(-1, -1), (-1, 1), (1, -1), (1, 1)]
    R = plane_curve_cone(P("x^2 + y^2"), ())
    assert R.rays == [] and R.apex
    R = plane_curve_cone(P("x^2 + y^2 - 1"), (1, 0))
    assert rays(R) == [(0, -1), (0, 1)]
    with pytest.raises(ValueError):
        plane_curve_cone(P("x^2 + y^2 - 1"), ())


def test_plane_irrational_rays():
    R = plane_curve_cone(P("y^2 - 2*x^2"), ())
    assert len(R.rays) == 4 and not all(r.is_rational for r in R.rays)
    assert R.contains((1, 2**0.5), tol=1e-12)


# -- initial forms ----------------------------------------------------------------------

def test_initial_form_examples():
    C = initial_form_cone(P("x^3 - y^2"), ())
    assert C.formula_str() == "-y^2 = 0"
    assert eval_real(C, (-1, 0)) and not plane_curve_cone(P("x^3 - y^2"), ()).contains((-1, 0))
    assert initial_form_cone(P("x^2 + y^2 - 1"), (1, 0)).formula_str() == "2*x = 0"
    C = initial_form_cone(P("x^3 - y^2 - z^2", XYZ), ())
    assert C.formula_str() == "-y^2 - z^2 = 0"


def test_initial_form_subspace():
    B = initial_form_zero_subspace([P("x^3 - y^2 - z^2", XYZ)], 3)
    assert B is not None and len(B) == 1 and B[0] in [(1, 0, 0), (Fraction(1), 0, 0)]


def test_initial_engine_certifies_outside(cusp):
    v = cone_membership_initial(q(cusp, (0, 1)))
    assert v.status == UNSUPPORTED and v.certified
    assert cone_membership_initial(q(cusp, (-1, 0))).status == INDETERMINATE


# -- deformation ---------------------------------------------------------------------------

def test_deformation_examples(cusp):
    half = S("x > 0", ("x",))
    assert deformation_slice_check(q(half, (1,))).supported
    assert deformation_slice_check(q(half, (-1,))).status == UNSUPPORTED
    assert deformation_slice_check(q(cusp, (1, 0))).supported


# -- exact cones, scans, ray sets -------------------------------------------------------

def test_exact_cone_surface(surface):
    R = exact_cone(surface)
    assert rays(R) == [(1, 0, 0)] and R.apex
    assert R.to_set(XYZ).formula_str() == "x >= 0 && y = 0 && z = 0"


def test_cone_scan_examples(cusp):
    sc = cone_scan(cusp, (), 8, ("numeric", "puiseux", "plane"))
    assert sc.supported() == [(1, 0)]
    assert not sc.conflicts and not sc.disagreements
    sc = cone_scan(S("1 = 0"), (), 8)
    assert sc.supported() == []
    sc = cone_scan(S("y = 0"), (), 8, ("numeric", "puiseux", "plane"))
    assert sorted(sc.supported()) == [(-1, 0), (1, 0)]


def test_sphere_grid():
    g = sphere_grid(2, 8)
    assert g[0] == (1, 0) and g[2] == (0, 1) and len(set(g)) == 8
    g3 = sphere_grid(3, 16)
    assert len(g3) == 16 and g3[:6] == [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]
    for v in g3:
        assert abs(sum(float(c) ** 2 for c in v) - 1) < 1e-5
    assert sphere_grid(3, 16) == g3


def test_combine_verdicts_prefers_exact():
    num = ConeVerdict(SUPPORTED, "numeric", False)
    exact = ConeVerdict(UNSUPPORTED, "puiseux", True)
    assert combine_verdicts({"numeric": num, "puiseux": exact}).status == UNSUPPORTED
    und = ConeVerdict(INDETERMINATE, "puiseux", False)
    assert combine_verdicts({"numeric": num, "puiseux": und}).status == SUPPORTED
    assert combine_verdicts({"puiseux": und}).status == INDETERMINATE


def test_rayset_algebra():
    a = RaySet(2, [Ray((1, 0)), Ray((2, 0))])
    assert len(a.rays) == 1 and a.contains((5, 0)) and a.contains((0, 0)) and not a.contains((-1, 0))
    b = RaySet(2, [Ray((-1, 0))])
    u = a.union(b)
    assert u.to_set(XY).formula_str() == "y = 0"
    d = u.difference(a)
    assert rays(d) == [(-1, 0)] and not d.apex
    rest = RaySet.everything(2).difference(u)
    assert rest.complement and rest.contains((0, 1)) and not rest.contains((1, 0))
    assert RaySet.empty(2).is_empty and RaySet.empty(2).dimension() == -1
    with pytest.raises(ValueError):
        Ray((0, 0))


def test_query_dimension_checks(cusp):
    with pytest.raises(Exception):
        ConeQuery(cusp, (), (1, 0, 0))
