"""Exact cones when they are finite unions of rays."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from ..poly import eval_rational
from ..semialg import Atom, SemialgebraicSet, conj, conjuncts_of, eval_real
from .curves import cone_membership_puiseux
from .initial import initial_form_zero_subspace
from .plane import plane_curve_cone
from .types import ConeQuery, Ray, RaySet

__all__ = ["exact_cone"]


def _single_equation(X: SemialgebraicSet):
    F = X.formula
    if isinstance(F, Atom) and F.rel == "=" and not F.poly.is_zero():
        return F.poly
    return None


def exact_cone(X: SemialgebraicSet, p: Sequence = ()) -> RaySet | None:
    """The cone of ``X`` at ``p`` as a RaySet, or None when it is out of reach.

    Plane curves go through the branch analysis.  Otherwise each disjunct
    must contain an equality whose initial forms confine the cone to a line;
    the two rays of that line are then decided exactly.
    """
    n = X.ambient_dim
    p = tuple(Fraction(v) for v in p) if len(p) else (Fraction(0),) * n
    f = _single_equation(X)
    if n == 2 and f is not None:
        if eval_rational(f, p) != 0:
            return RaySet.empty(2)
        R = plane_curve_cone(f, p)
        return None if R.undetermined else R
    Xp = X.translate(p)
    origin = (Fraction(0),) * n
    total = RaySet.empty(n)
    for C in conjuncts_of(Xp, split=False):
        if C.empty:
            continue
        piece = SemialgebraicSet(conj(*C.atoms), X.names)
        basis = initial_form_zero_subspace(C.eqs, n)
        if basis is None or len(basis) > 1:
            return None
        rays = []
        for v in basis:
            for sgn in (1, -1):
                y = tuple(sgn * c for c in v)
                verdict = cone_membership_puiseux(ConeQuery(piece, origin, y))
                if not verdict.determinate:
                    return None
                if verdict.supported:
                    rays.append(Ray(y))
        apex = bool(rays) or eval_real(piece, origin)
        total = total.union(RaySet(n, rays, apex))
    return total
