"""Exact real-root isolation for univariate rational polynomials.

Polynomials are dense coefficient lists, lowest degree first, with
``Fraction`` entries.  Roots are isolated with Sturm sequences and returned
as :class:`RealAlgebraic` numbers: a square-free defining polynomial plus an
isolating interval that can be refined on demand.
"""
from __future__ import annotations

from fractions import Fraction
from functools import total_ordering
from typing import Sequence

__all__ = [
    "normalize",
    "pderiv",
    "pdivmod",
    "pgcd",
    "squarefree",
    "peval",
    "sturm_sequence",
    "count_roots",
    "isolate_real_roots",
    "RealAlgebraic",
    "sign_at_root",
]

Poly = list  # list[Fraction], low -> high


def normalize(p: Sequence) -> Poly:
    p = [Fraction(c) for c in p]
    while p and p[-1] == 0:
        p.pop()
    return p


def deg(p: Poly) -> int:
    return len(p) - 1


def peval(p: Poly, x):
    acc = 0 * x
    for c in reversed(p):
        acc = acc * x + c
    return acc


def pderiv(p: Poly) -> Poly:
    return normalize([i * c for i, c in enumerate(p)][1:])


def pdivmod(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    a = normalize(a)
    b = normalize(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    r = list(a)
    lb = b[-1]
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        c = r[-1] / lb
        q[shift] = c
        for i, bc in enumerate(b):
            r[i + shift] -= c * bc
        r = normalize(r)
    return normalize(q), r


def _monic(p: Poly) -> Poly:
    return [c / p[-1] for c in p] if p else p


def pgcd(a: Poly, b: Poly) -> Poly:
    a, b = normalize(a), normalize(b)
    while b:
        a, b = b, pdivmod(a, b)[1]
    return _monic(a)


def squarefree(p: Poly) -> Poly:
    p = normalize(p)
    if len(p) <= 2:
        return _monic(p)
    g = pgcd(p, pderiv(p))
    return _monic(pdivmod(p, g)[0])


def multiplicity(p: Poly, root: "RealAlgebraic") -> int:
    """Multiplicity of ``root`` as a root of ``p`` (0 if not a root)."""
    p = normalize(p)
    k = 0
    while p and sign_at_root(p, root) == 0:
        k += 1
        p = pderiv(p)
    return k


def sturm_sequence(p: Poly) -> list[Poly]:
    p = normalize(p)
    seq = [p, pderiv(p)]
    while seq[-1]:
        r = pdivmod(seq[-2], seq[-1])[1]
        seq.append([-c for c in r])
    return [s for s in seq if s]


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _variations(seq, x) -> int:
    signs = [_sign(peval(s, x)) for s in seq]
    signs = [s for s in signs if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(p: Poly, lo: Fraction, hi: Fraction, seq=None) -> int:
    """Number of distinct real roots in the half-open interval (lo, hi]."""
    seq = seq or sturm_sequence(p)
    return _variations(seq, lo) - _variations(seq, hi)


def root_bound(p: Poly) -> Fraction:
    p = normalize(p)
    lead = abs(p[-1])
    return 1 + max((abs(c) / lead for c in p[:-1]), default=Fraction(0))


def isolate_real_roots(p: Sequence) -> list["RealAlgebraic"]:
    """All distinct real roots of ``p`` in increasing order."""
    p = normalize(p)
    if len(p) <= 1:
        return []
    sf = squarefree(p)
    seq = sturm_sequence(sf)
    b = root_bound(sf)
    out: list[RealAlgebraic] = []
    stack = [(-b, b)]
    while stack:
        lo, hi = stack.pop()
        n = count_roots(sf, lo, hi, seq)
        if n == 0:
            continue
        if n == 1:
            out.append(RealAlgebraic(sf, lo, hi, _seq=seq))
            continue
        mid = (lo + hi) / 2
        stack.append((lo, mid))
        stack.append((mid, hi))
    out.sort(key=lambda r: r.lo)
    return out


@total_ordering
class RealAlgebraic:
    """A real root of a square-free rational polynomial.

    The root lies in ``(lo, hi]``; if an exact rational value is detected
    the interval collapses to ``lo == hi == value``.
    """

    __slots__ = ("poly", "lo", "hi", "_seq")

    def __init__(self, poly: Poly, lo: Fraction, hi: Fraction, _seq=None):
        self.poly = normalize(poly)
        self.lo = Fraction(lo)
        self.hi = Fraction(hi)
        self._seq = _seq
        if peval(self.poly, self.hi) == 0:
            self.lo = self.hi
        else:
            self._try_rational()

    @classmethod
    def from_rational(cls, q) -> "RealAlgebraic":
        q = Fraction(q)
        return cls([-q, Fraction(1)], q, q)

    @property
    def seq(self):
        if self._seq is None:
            self._seq = sturm_sequence(self.poly)
        return self._seq

    def is_rational(self) -> bool:
        return self.lo == self.hi

    @property
    def value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("root is irrational")
        return self.lo

    def _try_rational(self, qmax: int = 10**6):
        if len(self.poly) == 2:
            r = -self.poly[0] / self.poly[1]
            self.lo = self.hi = r
            return
        # once the interval is narrow, a rational root with small
        # denominator is unique in it and is the best approximation
        self.refine(Fraction(1, 4 * qmax * qmax))
        if self.is_rational():
            return
        cand = ((self.lo + self.hi) / 2).limit_denominator(qmax)
        if self.lo < cand <= self.hi and peval(self.poly, cand) == 0:
            self.lo = self.hi = cand

    def refine(self, width: Fraction = Fraction(1, 10**12)):
        while self.hi - self.lo > width:
            self.bisect()
        return self

    def bisect(self):
        if self.is_rational():
            return
        mid = (self.lo + self.hi) / 2
        v = peval(self.poly, mid)
        if v == 0:
            self.lo = self.hi = mid
            return
        if count_roots(self.poly, self.lo, mid, self.seq) == 1:
            self.hi = mid
        else:
            self.lo = mid

    def sign(self) -> int:
        if self.is_rational():
            return _sign(self.lo)
        while self.lo < 0 < self.hi:
            self.bisect()
        return 1 if self.lo >= 0 else -1

    def __float__(self):
        if self.is_rational():
            return float(self.lo)
        self.refine(Fraction(1, 2**60))
        return float((self.lo + self.hi) / 2)

    def __neg__(self):
        if self.is_rational():
            return RealAlgebraic.from_rational(-self.lo)
        p = [c if i % 2 == 0 else -c for i, c in enumerate(self.poly)]
        return RealAlgebraic(p, -self.hi, -self.lo)

    def _cmp(self, other) -> int:
        if isinstance(other, RealAlgebraic):
            if other.is_rational():
                other = other.lo
            elif self.is_rational():
                return -other._cmp(self.lo)
            else:
                if self.poly == other.poly and self.lo == other.lo and self.hi == other.hi:
                    return 0
                g = pgcd(self.poly, other.poly)
                if len(g) > 1 and sign_at_root(g, self) == 0 and sign_at_root(g, other) == 0:
                    # both are roots of g; equal iff g's root set separates them
                    a, b = self, other
                    while not (a.hi <= b.lo or b.hi <= a.lo):
                        if count_roots(g, max(a.lo, b.lo), min(a.hi, b.hi)) == 1 and \
                                count_roots(g, min(a.lo, b.lo), max(a.hi, b.hi)) == 1:
                            return 0
                        a.bisect()
                        b.bisect()
                    return -1 if a.hi <= b.lo else 1
                while not (self.hi <= other.lo or other.hi <= self.lo):
                    self.bisect()
                    other.bisect()
                return -1 if self.hi <= other.lo else 1
        q = Fraction(other)
        if self.is_rational():
            return _sign(self.lo - q)
        if peval(self.poly, q) == 0 and self.lo < q <= self.hi:
            return 0
        while self.lo < q < self.hi:
            self.bisect()
            if self.is_rational():
                return _sign(self.lo - q)
        return -1 if self.hi <= q else 1

    def __eq__(self, other):
        try:
            return self._cmp(other) == 0
        except (TypeError, ValueError):
            return NotImplemented

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __hash__(self):
        if self.is_rational():
            return hash(self.lo)
        return hash(tuple(self.poly))

    def to_json(self):
        if self.is_rational():
            return str(self.lo)
        self.refine(Fraction(1, 10**12))
        return {
            "poly": [str(c) for c in self.poly],
            "interval": [str(self.lo), str(self.hi)],
            "approx": round(float(self), 12),
        }

    def __repr__(self):
        if self.is_rational():
            return f"RealAlgebraic({self.lo})"
        return f"RealAlgebraic(~{float(self):.12g})"


def sign_at_root(q: Sequence, root: RealAlgebraic) -> int:
    """Exact sign of the polynomial ``q`` at the algebraic number ``root``."""
    q = normalize(q)
    if not q:
        return 0
    if root.is_rational():
        return _sign(peval(q, root.lo))
    g = pgcd(q, root.poly)
    if len(g) > 1 and count_roots(g, root.lo, root.hi) == 1:
        return 0
    qseq = sturm_sequence(squarefree(q))
    while count_roots(q, root.lo, root.hi, qseq) > 0 or peval(q, root.hi) == 0:
        root.bisect()
        if root.is_rational():
            return _sign(peval(q, root.lo))
    return _sign(peval(q, root.hi))
