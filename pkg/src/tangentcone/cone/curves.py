"""Exact cone membership through curves ``x(t) = p + t*y + higher terms``.

A direction ``y`` is in the cone of ``X`` at ``p`` exactly when some curve
of this shape lies in ``X`` for small ``t > 0``.  The engine works per
disjunct of the translated set:

* an atom whose sign is the same along every such curve is settled by a
  leading-term certificate (this is where certified negatives come from);
* in the plane, the real branches of an equality in direction ``y`` are
  enumerated completely, so the remaining atoms can be checked branch by
  branch;
* otherwise a bounded search over rational corrections ``c * t^e`` on the
  exponent grid tries to build an explicit curve.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from ..branches import Branch, _hensel_sign, directional, newton_segments, real_branches, sign_along
from ..poly import Polynomial, default_names
from ..puiseux import PuiseuxPoint, PuiseuxSeries
from ..realroots import isolate_real_roots, multiplicity, peval
from ..semialg import Atom, Conjunct, conjuncts_of, eval_puiseux, eval_real, rel_holds
from .types import INDETERMINATE, SUPPORTED, UNSUPPORTED, ConeQuery, ConeVerdict

__all__ = ["DEFAULT_GRID", "sign_certificate", "cone_membership_puiseux", "curve_verdict"]

DEFAULT_GRID = tuple(sorted({Fraction(k, q) for q in range(1, 7) for k in range(q + 1, 4 * q + 1)}))


def _sgn(c) -> int:
    return (c > 0) - (c < 0)


def sign_certificate(g: Polynomial, y: Sequence[Fraction], k: int) -> int | None:
    """Sign of ``g`` along every curve ``t*y + o(t)``, or None if it can vary.

    Coordinates are written as ``x_k = s*y_k`` and ``x_j = s*y_j + w_j`` with
    ``w = o(s)``.  The pure part ``g(s*y)`` has a leading term ``c0 s^a0``;
    a term ``c s^a w^b`` is harmless if ``a + |b| >= a0`` or if ``b`` is even
    with ``c`` of the same sign as ``c0``.
    """
    if g.is_zero():
        return 0
    n = g.nvars
    # variables of F: s first, then w_j for j != k
    S = Polynomial.var(n, 0)
    subs = []
    nxt = 1
    for j in range(n):
        if j == k:
            subs.append(S.scale(y[k]))
        else:
            subs.append(S.scale(y[j]) + Polynomial.var(n, nxt))
            nxt += 1
    F = g.compose(subs)
    pure = [(e[0], c) for e, c in F.terms if not any(e[1:])]
    if not pure:
        return None
    a0, c0 = min(pure)
    for e, c in F.terms:
        b = e[1:]
        if not any(b):
            continue
        if e[0] + sum(b) >= a0:
            continue
        if all(v % 2 == 0 for v in b) and _sgn(c) == _sgn(c0):
            continue
        return None
    return _sgn(c0)


# -- exact curves ----------------------------------------------------------------

def _eval_sign(g: Polynomial, curve: list) -> int:
    v = g.evaluate(curve)
    if v.is_zero():
        return 0
    return _sgn(v.lead()[1])


def _series_bipoly(coeffs: list) -> dict:
    out = {}
    for j, A in enumerate(coeffs):
        for e, c in A.terms:
            out[(e, j)] = c
    return out


def _taylor_on_curve(g: Polynomial, k: int, curve: list) -> list:
    return [A.evaluate(curve) for A in g.taylor_in(k)]


def _rational_roots(poly: list) -> tuple[list, list]:
    rat, irr = [], []
    if not any(poly[1:]):
        return rat, irr
    for r in isolate_real_roots(poly):
        simple = multiplicity(poly, r) == 1
        if r.is_rational():
            rat.append(r.value)
        elif simple:
            irr.append(r)
    rat.sort(key=lambda c: (c < 0, abs(c)))
    return rat, irr


def _sign_points(poly: list) -> list:
    """Rational test points between and around the real roots of ``poly``."""
    pts = {Fraction(v) for v in (1, -1, 2, -2, Fraction(1, 2), Fraction(-1, 2), 4, -4)}
    roots = isolate_real_roots(poly) if any(poly[1:]) else []
    for r in roots:
        r.refine(Fraction(1, 64))
        pts.add(Fraction(r.lo) - 1)
        pts.add(Fraction(r.hi) + 1)
    for a, b in zip(roots, roots[1:]):
        pts.add((Fraction(a.hi) + Fraction(b.lo)) / 2)
    return sorted((p for p in pts if p != 0), key=lambda v: (v.denominator, abs(v), v < 0))


def _wants(rel: str):
    if rel in (">", ">="):
        return lambda s: s > 0
    if rel in ("<", "<="):
        return lambda s: s < 0
    return lambda s: s != 0


def _exponent_candidates(G: dict, grid: Sequence[Fraction]) -> list:
    slopes = sorted({e for e, _, _ in newton_segments(G)})
    marks = [Fraction(1)] + [e for e in slopes if e > 1] + [grid[-1] + 1]
    out = [e for e in slopes if e in grid]
    for lo, hi in zip(marks, marks[1:]):
        inside = [e for e in grid if lo < e < hi]
        if inside:
            out.append(min(inside, key=lambda e: (e.denominator, e)))
    return sorted(set(out))


def _leading_poly(G: dict, e: Fraction) -> list | None:
    level = min(a + e * j for (a, j) in G)
    top = max(j for (a, j) in G)
    poly = [Fraction(0)] * (top + 1)
    for (a, j), c in G.items():
        if a + e * j == level:
            poly[j] += c
    return poly


class _Search:
    def __init__(self, atoms: list, n: int, grid, max_corrections: int):
        self.atoms = atoms
        self.n = n
        self.grid = tuple(grid)
        self.max_corrections = max_corrections
        self.nodes = 0
        self.hensel = None

    def failing(self, curve):
        for a in self.atoms:
            if not rel_holds(_eval_sign(a.poly, curve), a.rel):
                return a
        return None

    def run(self, curve: list, depth: int):
        self.nodes += 1
        if self.nodes > 4000:
            return None
        bad = self.failing(curve)
        if bad is None:
            return curve
        if depth >= self.max_corrections:
            return None
        for k in range(self.n):
            G = _series_bipoly(_taylor_on_curve(bad.poly, k, curve))
            if not any(j > 0 for _, j in G):
                continue
            for e, c in self._moves(bad, G, k, curve):
                nxt = list(curve)
                nxt[k] = nxt[k] + PuiseuxSeries.monomial(c, e)
                found = self.run(nxt, depth + 1)
                if found is not None:
                    return found
        return None

    def _moves(self, atom: Atom, G: dict, k: int, curve: list):
        if atom.rel == "=":
            for e, _, edge in newton_segments(G):
                if e not in self.grid:
                    continue
                rat, irr = _rational_roots(edge)
                for c in rat:
                    yield e, c
                for r in irr:
                    self._try_hensel(atom, k, e, r, curve)
            return
        want = _wants(atom.rel)
        for e in _exponent_candidates(G, self.grid):
            L = _leading_poly(G, e)
            if not any(L[1:]):
                continue
            picks = [c for c in _sign_points(L) if want(_sgn(peval(L, c)))]
            for c in picks[:2]:
                yield e, c

    def _try_hensel(self, atom: Atom, k: int, e: Fraction, root, curve: list):
        # a simple irrational root lifts to a true branch; check the rest along it
        if self.hensel is not None:
            return
        br = Branch([(e, root)], True, False)
        for a in self.atoms:
            if a is atom:
                continue
            coeffs = _taylor_on_curve(a.poly, k, curve)
            if a.rel == "=":
                if len(coeffs) > 1 or not coeffs[0].is_zero():
                    return
                continue
            s = _hensel_sign(_series_bipoly(coeffs), br)
            if s is None or not rel_holds(s, a.rel):
                return
        self.hensel = (k, list(curve), br)


def _ray_curve(p, y) -> list:
    return [PuiseuxSeries.const(pi) + PuiseuxSeries.monomial(yi, 1) for pi, yi in zip(p, y)]


def _plane(atoms: list, y: tuple, names) -> tuple[str, dict | None, str]:
    """Branch-by-branch analysis of a plane disjunct with an equality."""
    k = 0 if y[0] != 0 else 1
    eq = next(a for a in atoms if a.rel == "=")
    F = directional(eq.poly, y, k)
    branches = real_branches(F, Fraction(1), strict=True)
    branches.sort(key=lambda b: float(b.lead_coeff()) < 0)
    if not branches:
        return UNSUPPORTED, None, f"no real branch of {eq.poly.to_str(names)} = 0 in this direction"
    unknown = []
    for br in branches:
        if not br.exists:
            unknown.append("a branch with a repeated irrational coefficient")
            continue
        verdict = True
        for a in atoms:
            if a is eq:
                continue
            s = sign_along(directional(a.poly, y, k), F, br)
            if s is None:
                verdict = None
                unknown.append(f"sign of {a.poly.to_str(names)} along a branch")
                break
            if not rel_holds(s, a.rel):
                verdict = False
                break
        if verdict:
            return SUPPORTED, {"k": k, "branch": br}, ""
    if unknown:
        return INDETERMINATE, None, "; ".join(unknown)
    return UNSUPPORTED, None, "every real branch violates an atom"


def _branch_witness(p, y, k: int, br: Branch, names) -> dict:
    o = 1 - k
    if br.exact and br.rational:
        curve = _ray_curve(p, y)
        for e, c in br.rational_terms():
            curve[o] = curve[o] + PuiseuxSeries.monomial(c, e)
        return {"kind": "curve", "curve": PuiseuxPoint(curve).to_literal()}
    ray = [PuiseuxSeries.const(pi) + PuiseuxSeries.monomial(yi, 1) for pi, yi in zip(p, y)]
    return {
        "kind": "branch",
        "parameter": f"{names[k]} = {ray[k].to_literal()}",
        "expansion": f"{names[o]} = {ray[o].to_literal()} + " + br.to_str("t"),
    }


def _conjunct_verdict(C: Conjunct, y, grid, max_corrections: int, names):
    """(status, certified, witness, reason) for one disjunct of the translated set."""
    if C.empty:
        return UNSUPPORTED, True, None, "disjunct is empty"
    n = C.n
    ks = [k for k in range(n) if y[k] != 0]
    live = []
    for a in C.atoms:
        s = None
        for k in ks:
            s = sign_certificate(a.poly, y, k)
            if s is not None:
                break
        if s is None:
            live.append(a)
        elif not rel_holds(s, a.rel):
            return UNSUPPORTED, True, None, f"{a.to_str(names)} fails along every curve in this direction"
    if not live:
        curve = _ray_curve([0] * n, y)
        return SUPPORTED, True, curve, ""
    if n == 2 and any(a.rel == "=" for a in live):
        status, info, why = _plane(live, y, names)
        if status == SUPPORTED:
            return SUPPORTED, True, info, ""
        return status, status == UNSUPPORTED, None, why
    search = _Search(live, n, grid, max_corrections)
    found = search.run(_ray_curve([0] * n, y), 0)
    if found is not None:
        return SUPPORTED, True, found, ""
    if search.hensel is not None:
        k, curve, br = search.hensel
        return SUPPORTED, True, {"hensel": (k, curve, br)}, ""
    return INDETERMINATE, False, None, "exponent grid exhausted without a certificate"


def _witness_json(w, p, y, names) -> dict:
    if isinstance(w, list):
        shifted = [c + PuiseuxSeries.const(pi) for c, pi in zip(w, p)]
        return {"kind": "curve", "curve": PuiseuxPoint(shifted).to_literal()}
    if "branch" in w:
        return _branch_witness(p, y, w["k"], w["branch"], names)
    k, curve, br = w["hensel"]
    shifted = [c + PuiseuxSeries.const(pi) for c, pi in zip(curve, p)]
    return {
        "kind": "branch",
        "curve": PuiseuxPoint(shifted).to_literal(),
        "correction": f"{names[k]} += " + br.to_str("t"),
    }


def curve_verdict(X, curve: PuiseuxPoint):
    """Exact membership of a curve in ``X`` for small ``t > 0``."""
    return eval_puiseux(X, curve)


def cone_membership_puiseux(
    q: ConeQuery,
    grid: Sequence[Fraction] = DEFAULT_GRID,
    max_corrections: int = 3,
) -> ConeVerdict:
    grid = tuple(sorted(Fraction(e) for e in grid))
    if not grid or grid[0] <= 1:
        raise ValueError("ansatz exponents must all exceed 1")
    X = q.X
    n = X.ambient_dim
    names = X.names if len(X.names) == n else default_names(n)
    if q.is_zero:
        if eval_real(X, q.p):
            return ConeVerdict(SUPPORTED, "puiseux", True, {"kind": "curve", "curve": PuiseuxPoint.from_rational(q.p).to_literal()})
        for i in range(n):
            for sgn in (1, -1):
                e = [Fraction(0)] * n
                e[i] = Fraction(sgn)
                v = cone_membership_puiseux(ConeQuery(X, q.p, e), grid, max_corrections)
                if v.supported:
                    return ConeVerdict(SUPPORTED, "puiseux", True, v.witness, "the cone is nonempty")
        return ConeVerdict(INDETERMINATE, "puiseux", False, None, "no supported axis direction")
    Xp = X.translate(q.p)
    reasons = []
    all_certified = True
    for C in conjuncts_of(Xp, split=False):
        status, certified, witness, why = _conjunct_verdict(C, q.y, grid, max_corrections, names)
        if status == SUPPORTED:
            return ConeVerdict(SUPPORTED, "puiseux", True, _witness_json(witness, q.p, q.y, names))
        if not certified:
            all_certified = False
        if why:
            reasons.append(why)
    reason = "; ".join(dict.fromkeys(reasons))
    if all_certified:
        return ConeVerdict(UNSUPPORTED, "puiseux", True, None, reason or "the set is empty")
    return ConeVerdict(INDETERMINATE, "puiseux", False, None, reason)
