"""Exact tangent cones of plane algebraic curves via Newton-Puiseux branches."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from ..branches import bipoly, real_branches
from ..poly import Polynomial, eval_rational, translate
from .types import Ray, RaySet

__all__ = ["plane_curve_cone"]


def _side(g: Polynomial, sign: int, swap: bool) -> tuple[list, list]:
    """Rays of real branches on one side: ``x = sign*s`` (or ``y`` when swapped)."""
    S = Polynomial.var(2, 0)
    W = Polynomial.var(2, 1)
    subs = [W, S.scale(sign)] if swap else [S.scale(sign), W]
    G = bipoly(g.compose(subs), 0)
    if swap:
        branches = real_branches(G, Fraction(1), strict=True)
    else:
        branches = real_branches(G, Fraction(1), strict=False)
    sure, unsure = [], []
    for br in branches:
        if swap:
            vec = [Fraction(0), Fraction(sign)]
        elif br.terms and br.order == 1:
            vec = [Fraction(sign), br.lead_coeff()]
        else:
            vec = [Fraction(sign), Fraction(0)]
        (sure if br.exists else unsure).append(Ray(vec))
    return sure, unsure


def plane_curve_cone(f: Polynomial, p: Sequence) -> RaySet:
    """The tangent cone of ``{f = 0}`` at ``p`` as a finite union of rays.

    Rays whose branch could not be certified to exist are listed in
    ``undetermined`` instead of ``rays``.
    """
    if f.nvars != 2:
        raise ValueError("plane_curve_cone needs a polynomial in two variables")
    if f.is_zero():
        raise ValueError("the zero polynomial defines the whole plane")
    p = [Fraction(v) for v in p] if len(p) else [Fraction(0), Fraction(0)]
    if eval_rational(f, p) != 0:
        raise ValueError("the point is not on the curve")
    g = translate(f, p)
    rays, unsure = [], []
    for swap in (False, True):
        for sign in (1, -1):
            a, b = _side(g, sign, swap)
            rays += a
            unsure += b
    return RaySet(2, rays, True, False, unsure)
