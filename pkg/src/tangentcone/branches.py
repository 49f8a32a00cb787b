"""Real Newton-Puiseux branches of bivariate equations as ``s -> 0+``.

A bivariate polynomial in ``(s, w)`` with rational ``s``-exponents is a dict
``{(a, j): coeff}`` meaning ``coeff * s^a * w^j``.  :func:`real_branches`
enumerates the real roots ``w(s)`` with prescribed minimal order, either
with their exact expansion (when it terminates) or with a prefix that
determines the branch uniquely.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from .poly import Polynomial
from .realroots import RealAlgebraic, isolate_real_roots, multiplicity, sign_at_root

__all__ = [
    "BiPoly",
    "bipoly",
    "directional",
    "Branch",
    "newton_segments",
    "real_branches",
    "substitute_shift",
    "sign_along",
    "refine_branch",
]

BiPoly = dict  # {(Fraction a, int j): Fraction}


def bipoly(f: Polynomial, s_index: int = 0) -> BiPoly:
    """A 2-variable polynomial as a bipoly with ``s`` the variable ``s_index``."""
    out: BiPoly = {}
    for e, c in f.terms:
        out[(Fraction(e[s_index]), e[1 - s_index])] = c
    return out


def directional(g: Polynomial, y: Sequence, k: int) -> BiPoly:
    """``F(s, w) = g(x)`` with ``x_k = s*y_k`` and the other coordinate ``s*y_o + w``."""
    if g.nvars != 2:
        raise ValueError("directional bipolys are for plane polynomials")
    o = 1 - k
    S = Polynomial.var(2, 0)
    W = Polynomial.var(2, 1)
    subs = [None, None]
    subs[k] = S.scale(y[k])
    subs[o] = S.scale(y[o]) + W
    return bipoly(g.compose(subs), 0)


def _add(acc: dict, key, c):
    v = acc.get(key, 0) + c
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


def _upoly_mul(p: dict, q: dict) -> dict:
    out: dict = {}
    for a, c in p.items():
        for b, d in q.items():
            _add(out, a + b, c * d)
    return out


def substitute_shift(G: BiPoly, P: Sequence) -> BiPoly:
    """``G(s, P(s) + d)`` as a bipoly in ``(s, d)``; ``P`` is a list of rational terms."""
    Pd = {Fraction(e): Fraction(c) for e, c in P if c}
    maxj = max((j for _, j in G), default=0)
    powers = [{Fraction(0): Fraction(1)}]
    for _ in range(maxj):
        powers.append(_upoly_mul(powers[-1], Pd))
    out: BiPoly = {}
    for (a, j), c in G.items():
        for i in range(j + 1):
            b = comb(j, i)
            for e, pc in powers[j - i].items():
                _add(out, (a + e, i), c * b * pc)
    return out


def substitute_scaled(G: BiPoly, e: Fraction, c: Fraction) -> BiPoly:
    """``G(s, s^e (c + u))`` as a bipoly in ``(s, u)``."""
    out: BiPoly = {}
    for (a, j), v in G.items():
        for i in range(j + 1):
            _add(out, (a + e * j, i), v * comb(j, i) * c ** (j - i))
    return out


def newton_segments(G: BiPoly) -> list[tuple]:
    """Lower-hull segments ``(e, j_left, edge)`` with ``e > 0`` the branch order.

    ``edge`` is the dense edge polynomial in ``c`` (low to high), shifted so
    its constant term is the left endpoint.
    """
    low: dict[int, Fraction] = {}
    for (a, j) in G:
        if j not in low or a < low[j]:
            low[j] = a
    pts = sorted(low.items())
    hull: list = []
    for p in pts:
        while len(hull) >= 2:
            (j1, a1), (j2, a2) = hull[-2], hull[-1]
            # drop hull[-1] if it is on or above the chord hull[-2] -> p
            if (a2 - a1) * (p[0] - j1) >= (p[1] - a1) * (j2 - j1):
                hull.pop()
            else:
                break
        hull.append(p)
    out = []
    for (j1, a1), (j2, a2) in zip(hull, hull[1:]):
        e = Fraction(a1 - a2) / (j2 - j1)
        if e <= 0:
            continue
        level = a1 + j1 * e
        edge = [Fraction(0)] * (j2 - j1 + 1)
        for (a, j), c in G.items():
            if j1 <= j <= j2 and a + j * e == level:
                edge[j - j1] += c
        out.append((e, j1, edge))
    return out


@dataclass
class Branch:
    """A real root ``w(s) = sum c_i s^{e_i} + ...`` of some equation.

    Every coefficient is rational except possibly the last.  ``exact``
    means the listed terms are the whole root.  ``exists`` is False when
    the prefix could not be shown to extend to a real root.
    """

    terms: list = field(default_factory=list)
    exists: bool = True
    exact: bool = False

    @property
    def order(self):
        return self.terms[0][0] if self.terms else None

    @property
    def rational(self) -> bool:
        return all(not isinstance(c, RealAlgebraic) or c.is_rational() for _, c in self.terms)

    def rational_terms(self) -> list:
        return [(e, c.value if isinstance(c, RealAlgebraic) else c) for e, c in self.terms]

    def lead_coeff(self):
        return self.terms[0][1] if self.terms else Fraction(0)

    def to_str(self, var: str = "s") -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms:
            cs = str(c) if not isinstance(c, RealAlgebraic) else (str(c.value) if c.is_rational() else f"{float(c):.12g}")
            parts.append(f"({cs})*{var}^({e})")
        tail = "" if self.exact else " + ..."
        return " + ".join(parts) + tail


def _as_coeff(r: RealAlgebraic):
    return r.value if r.is_rational() else r


def _is_root(G: BiPoly, terms) -> bool:
    return not any(j == 0 for _, j in substitute_shift(G, terms))


def real_branches(G: BiPoly, lower: Fraction, strict: bool = True, depth: int = 0, max_depth: int = 6) -> list[Branch]:
    """Real roots ``w(s)`` of ``G(s, w) = 0`` with ``v(w) > lower`` (``>=`` if not strict).

    The identically zero root is included when ``G(s, 0) = 0``.  Raises
    ``ValueError`` for ``G = 0``.
    """
    if not G:
        raise ValueError("every w is a root of the zero polynomial")
    lower = Fraction(lower)
    out: list[Branch] = []
    jmin = min(j for _, j in G)
    if jmin > 0:
        out.append(Branch([], True, True))
        G = {(a, j - jmin): c for (a, j), c in G.items()}
    for e, _, edge in newton_segments(G):
        if e < lower or (strict and e == lower):
            continue
        for r in isolate_real_roots(edge):
            c = _as_coeff(r)
            if multiplicity(edge, r) == 1:
                exact = not isinstance(c, RealAlgebraic) and _is_root(G, [(e, c)])
                out.append(Branch([(e, c)], True, exact))
            elif isinstance(c, RealAlgebraic) or depth >= max_depth:
                out.append(Branch([(e, c)], False, False))
            else:
                H = substitute_scaled(G, e, c)
                for sub in real_branches(H, Fraction(0), True, depth + 1, max_depth):
                    terms = [(e, c)] + [(e + e2, c2) for e2, c2 in sub.terms]
                    out.append(Branch(terms, sub.exists, sub.exact))
    return out


def refine_branch(G: BiPoly, br: Branch) -> Branch | None:
    """The branch with one more term, or None when that is not possible."""
    if br.exact or not br.exists or not br.rational:
        return None
    P = br.rational_terms()
    H = substitute_shift(G, P)
    if not any(j == 0 for _, j in H):
        return Branch(br.terms, True, True)
    subs = [b for b in real_branches(H, P[-1][0], True) if b.terms]
    if len(subs) != 1:
        return None
    sub = subs[0]
    return Branch(br.terms + sub.terms, sub.exists, sub.exact)


def _lowest(H: BiPoly):
    a0 = min((a for (a, j) in H if j == 0), default=None)
    return a0


def sign_along(Q: BiPoly, G: BiPoly, br: Branch, max_refine: int = 8) -> int | None:
    """Sign of ``Q(s, w(s))`` for small ``s > 0`` along the branch ``br`` of ``G``.

    Returns -1, 0, 1 or None when the available expansion cannot decide.
    """
    if not Q:
        return 0
    for _ in range(max_refine + 1):
        if not br.rational:
            return _hensel_sign(Q, br)
        P = br.rational_terms()
        H = substitute_shift(Q, P)
        a0 = _lowest(H)
        if br.exact:
            if a0 is None:
                return 0
            c0 = H[(a0, 0)]
            return 1 if c0 > 0 else -1
        e = P[-1][0] if P else Fraction(0)
        if a0 is not None and all(a + j * e >= a0 for (a, j) in H if j > 0):
            c0 = H[(a0, 0)]
            return 1 if c0 > 0 else -1
        nxt = refine_branch(G, br)
        if nxt is None:
            return None
        br = nxt
    return None


def _hensel_sign(Q: BiPoly, br: Branch) -> int | None:
    # w = P(s) + s^e (c + u) with c algebraic and u = o(1)
    P = [(e, c.value if isinstance(c, RealAlgebraic) else c) for e, c in br.terms[:-1]]
    e, c = br.terms[-1]
    H = substitute_shift(Q, P)
    groups: dict[Fraction, list] = {}
    for (a, j), v in H.items():
        groups.setdefault(a + e * j, []).append((j, v))
    for lvl in sorted(groups):
        dense = [Fraction(0)] * (max(j for j, _ in groups[lvl]) + 1)
        for j, v in groups[lvl]:
            dense[j] += v
        if not any(dense):
            continue
        sg = sign_at_root(dense, c)
        return sg if sg != 0 else None
    return 0
