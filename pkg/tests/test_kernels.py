from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import P, polynomials
from tangentcone import kernels
from tangentcone.poly import eval_rational
from tangentcone.semialg import _pack

BACKENDS = kernels.backends()
needs_compiled = pytest.mark.skipif("cython" not in BACKENDS, reason="compiled extension not built")


def _pts(seed, m=64, n=2):
    return np.random.default_rng(seed).uniform(-1.5, 1.5, size=(m, n))


def test_selected_backend_is_known():
    assert kernels.BACKEND in ("cython", "python")
    assert "python" in BACKENDS


@given(st.lists(polynomials(max_terms=4), min_size=1, max_size=3), st.integers(0, 1000))
def test_python_values_match_exact(polys, seed):
    pack = _pack(polys, 2)
    pts = _pts(seed, 8)
    vals, mags = BACKENDS["python"].eval_packed(*pack, pts)
    for r, x in enumerate(pts):
        xq = [Fraction(float(v)) for v in x]
        for i, f in enumerate(polys):
            want = float(eval_rational(f, xq))
            assert vals[r, i] == pytest.approx(want, rel=1e-9, abs=1e-9)
            assert mags[r, i] >= abs(vals[r, i]) - 1e-12


@needs_compiled
@settings(max_examples=40)
@given(st.lists(polynomials(max_terms=5), min_size=1, max_size=3), st.integers(0, 1000))
def test_backends_agree_on_values_and_jacobians(polys, seed):
    pack = _pack(polys, 2)
    pts = _pts(seed)
    py, cy = BACKENDS["python"], BACKENDS["cython"]
    for a, b in zip(py.eval_packed(*pack, pts), cy.eval_packed(*pack, pts)):
        np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-12)
    for a, b in zip(py.eval_grad_packed(*pack, pts), cy.eval_grad_packed(*pack, pts)):
        np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-12)


@needs_compiled
@pytest.mark.parametrize("text", ["x^3 - y^2", "x^2 + y^2 - 1", "y - x^2", "x*y - 1/4"])
def test_backends_agree_on_projection(text):
    pack = _pack([P(text)], 2)
    pts = _pts(5, 200)
    caps = np.full(len(pts), 0.5)
    a = BACKENDS["python"].newton_packed(*pack, pts, caps)
    b = BACKENDS["cython"].newton_packed(*pack, pts, caps)
    # iterations stop at the residual tolerance, so rounding order can leave
    # tiny differences near singular points
    np.testing.assert_allclose(a, b, rtol=1e-7, atol=1e-8)


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_projection_lands_on_curve(name):
    pack = _pack([P("x^2 + y^2 - 1")], 2)
    pts = _pts(9, 100)
    pts = pts[np.linalg.norm(pts, axis=1) > 0.3]
    out = BACKENDS[name].newton_packed(*pack, pts, np.full(len(pts), 2.0))
    np.testing.assert_allclose(np.linalg.norm(out, axis=1), 1.0, atol=1e-9)


def test_caps_bound_each_projection():
    pack = _pack([P("x - 5")], 2)
    pts = np.zeros((4, 2))
    for name, mod in BACKENDS.items():
        out = mod.newton_packed(*pack, pts, np.full(4, 0.25))
        assert np.all(np.linalg.norm(out - pts, axis=1) <= 0.25 * 30 + 1e-12), name
