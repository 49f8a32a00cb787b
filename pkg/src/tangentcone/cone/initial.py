"""Initial-form over-approximation of tangent cones.

Along a curve ``p + t*y + o(t)`` a polynomial vanishing at ``p`` behaves like
``t^d * in(g)(y)`` where ``in(g)`` is its lowest homogeneous part.  So every
cone direction satisfies the initial-form version of each atom, which gives
a superset of the cone and certified negatives outside it.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from ..poly import Polynomial, default_names, eval_rational, initial_form, translate
from ..semialg import Atom, SemialgebraicSet, conj, disj, dnf, eval_real, rel_holds
from .types import INDETERMINATE, UNSUPPORTED, ConeQuery, ConeVerdict

__all__ = [
    "initial_form_cone",
    "initial_form_superset",
    "cone_membership_initial",
    "initial_form_zero_subspace",
]


def _sgn(c) -> int:
    return (c > 0) - (c < 0)


def initial_form_cone(f: Polynomial, p: Sequence) -> SemialgebraicSet:
    """``{in(f translated to p) = 0}``, a superset of the cone of ``{f = 0}`` at ``p``."""
    if f.is_zero():
        raise ValueError("the zero polynomial has no initial form")
    n = f.nvars
    p = [Fraction(v) for v in p] if len(p) else [Fraction(0)] * n
    if eval_rational(f, p) != 0:
        raise ValueError("the point is not on the hypersurface")
    return SemialgebraicSet(Atom(initial_form(translate(f, p)), "="), default_names(n))


def _relaxed(a: Atom, n: int):
    """The initial-form constraint implied by ``a`` at the origin, or True/False."""
    c = a.poly.constant_term()
    if c != 0:
        # sign is locally constant near the origin
        return rel_holds(_sgn(c), a.rel)
    if a.poly.is_zero():
        return rel_holds(0, a.rel)
    lead = initial_form(a.poly)
    if a.rel == "=":
        return Atom(lead, "=")
    if a.rel in (">", ">="):
        return Atom(lead, ">=")
    if a.rel in ("<", "<="):
        return Atom(lead, "<=")
    return True


def initial_form_superset(X: SemialgebraicSet, p: Sequence) -> SemialgebraicSet:
    """A semialgebraic superset of the cone of ``X`` at ``p`` built from initial forms."""
    n = X.ambient_dim
    p = [Fraction(v) for v in p] if len(p) else [Fraction(0)] * n
    Xp = X.translate(p)
    pieces = []
    for atoms in dnf(Xp.formula):
        rows = []
        dead = False
        for a in atoms:
            r = _relaxed(a, n)
            if r is False:
                dead = True
                break
            if r is not True:
                rows.append(r)
        if dead:
            continue
        pieces.append(conj(*rows) if rows else Atom(Polynomial.zero(n), "="))
    if not pieces:
        return SemialgebraicSet(Atom(Polynomial.const(n, 1), "="), X.names)
    return SemialgebraicSet(disj(*pieces), X.names)


def cone_membership_initial(q: ConeQuery) -> ConeVerdict:
    """Certified unsupported outside the initial-form superset, indeterminate inside."""
    S = initial_form_superset(q.X, q.p)
    if eval_real(S, q.y):
        return ConeVerdict(INDETERMINATE, "initial", False, None, "inside the initial-form superset")
    return ConeVerdict(UNSUPPORTED, "initial", True, None, "violates an initial-form constraint")


def _rational_kernel(rows: list, n: int) -> list:
    """A basis of ``{v : row . v = 0}`` for rational rows."""
    M = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][c]
        M[r] = [v * inv for v in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -M[i][fc]
        basis.append(tuple(v))
    return basis


def _form_rows(form: Polynomial) -> list | None:
    """Linear rows whose common zeros are exactly the zeros of ``form``, if recognised."""
    n = form.nvars
    d = form.degree
    if d == 1:
        return [tuple(form.coeff(tuple(1 if j == i else 0 for j in range(n))) for i in range(n))]
    signs = set()
    rows = []
    for e, c in form.terms:
        nz = [i for i, k in enumerate(e) if k]
        if len(nz) != 1 or e[nz[0]] % 2:
            return None
        signs.add(_sgn(c))
        rows.append(tuple(Fraction(1 if j == nz[0] else 0) for j in range(n)))
    if len(signs) != 1:
        return None
    return rows


def initial_form_zero_subspace(polys: Sequence[Polynomial], n: int) -> list | None:
    """Basis of a linear subspace containing the common zeros of the initial forms.

    Only recognised forms contribute (linear forms and same-sign sums of even
    powers of single variables); returns None when none is recognised.
    """
    rows = []
    seen = False
    for g in polys:
        if g.is_zero() or g.constant_term() != 0:
            continue
        r = _form_rows(initial_form(g))
        if r is not None:
            rows += r
            seen = True
    if not seen:
        return None
    return _rational_kernel(rows, n)
