"""Truncated Puiseux series over the rationals.

This is the concrete non-archimedean real closed valued field used by the
exact engines: elements are finite sums ``sum c_i t^{e_i}`` with rational
exponents plus an optional ``O(t^N)`` truncation.  A series without a
truncation is exact (every omitted coefficient is known to be zero).

The parameter ``t`` is a positive infinitesimal, so the sign of a nonzero
series is the sign of its leading coefficient, ``v`` is the least exponent
and the residue is the ``t^0`` coefficient.
"""
from __future__ import annotations

import math
import re
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .logic import FALSE, TRUE, Indeterminate, Verdict3, unknown
from .poly import DimensionError

__all__ = [
    "EXACT",
    "Inf",
    "INF",
    "PuiseuxSeries",
    "PuiseuxPoint",
    "RvClass",
    "Direction",
    "Ball",
    "NotInValuationRing",
    "UnboundedCurve",
    "default_truncation",
    "truncation_order",
    "ps_arith",
    "valuation",
    "vhat",
    "residue",
    "rvhat",
    "direction",
    "ball_contains",
    "ps_limit",
    "risometry_check",
    "RisometryReport",
    "parse_series",
]

EXACT = math.inf
_DEFAULT_TRUNC = [Fraction(8)]


def default_truncation() -> Fraction:
    return _DEFAULT_TRUNC[0]


@contextmanager
def truncation_order(order):
    """Temporarily change the truncation used for series that must be cut off."""
    old = _DEFAULT_TRUNC[0]
    _DEFAULT_TRUNC[0] = Fraction(order)
    try:
        yield
    finally:
        _DEFAULT_TRUNC[0] = old


class NotInValuationRing(ValueError):
    pass


class UnboundedCurve(ValueError):
    pass


class Inf:
    """The valuation of zero; ``truncated`` marks 'zero as far as known'."""

    __slots__ = ("truncated",)

    def __init__(self, truncated: bool = False):
        self.truncated = truncated

    def __eq__(self, other):
        return isinstance(other, Inf)

    def __hash__(self):
        return hash("inf")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return isinstance(other, Inf)

    def __gt__(self, other):
        return not isinstance(other, Inf)

    def __ge__(self, other):
        return True

    def __repr__(self):
        return "INF?" if self.truncated else "INF"


INF = Inf()


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class PuiseuxSeries:
    __slots__ = ("terms", "prec", "_hash")

    def __init__(self, terms: Iterable = (), prec=EXACT):
        if prec != EXACT:
            prec = _frac(prec)
        acc: dict[Fraction, Fraction] = {}
        for e, c in terms:
            e = _frac(e)
            if e >= prec:
                continue
            acc[e] = acc.get(e, 0) + _frac(c)
        self.terms = tuple(sorted((e, c) for e, c in acc.items() if c))
        self.prec = prec
        self._hash = None

    @classmethod
    def _raw(cls, terms: tuple, prec) -> "PuiseuxSeries":
        s = cls.__new__(cls)
        s.terms = terms
        s.prec = prec
        s._hash = None
        return s

    @classmethod
    def const(cls, c) -> "PuiseuxSeries":
        return cls([(0, c)])

    @classmethod
    def monomial(cls, c, e) -> "PuiseuxSeries":
        return cls([(e, c)])

    # -- queries --------------------------------------------------------
    @property
    def is_exact(self) -> bool:
        return self.prec == EXACT

    def is_zero(self) -> bool:
        """Exactly zero (no terms and no truncation)."""
        return not self.terms and self.prec == EXACT

    def known_zero(self) -> bool:
        """No terms below the truncation order."""
        return not self.terms

    def lead(self) -> tuple[Fraction, Fraction]:
        if not self.terms:
            raise Indeterminate("series has no known nonzero term")
        return self.terms[0]

    @property
    def val_lower(self):
        """A lower bound for the valuation (exact when terms exist)."""
        if self.terms:
            return self.terms[0][0]
        return self.prec

    def coeff_at(self, e) -> Fraction:
        e = _frac(e)
        if e >= self.prec:
            raise Indeterminate(f"coefficient of t^{e} lies beyond O(t^{self.prec})")
        for ee, c in self.terms:
            if ee == e:
                return c
        return Fraction(0)

    def sign(self) -> int:
        if self.terms:
            return 1 if self.terms[0][1] > 0 else -1
        if self.prec == EXACT:
            return 0
        raise Indeterminate(f"series is zero up to O(t^{self.prec})")

    def truncate(self, prec) -> "PuiseuxSeries":
        prec = min(self.prec, _frac(prec))
        return PuiseuxSeries(self.terms, prec)

    def ramification(self) -> int:
        """Least common denominator of the exponents."""
        d = 1
        for e, _ in self.terms:
            d = d * e.denominator // math.gcd(d, e.denominator)
        return d

    # -- arithmetic ---------------------------------------------------
    @staticmethod
    def _coerce(x):
        if isinstance(x, PuiseuxSeries):
            return x
        if isinstance(x, (int, Fraction)):
            return PuiseuxSeries.const(x)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        prec = min(self.prec, other.prec)
        acc = dict(self.terms)
        for e, c in other.terms:
            acc[e] = acc.get(e, 0) + c
        return PuiseuxSeries._raw(
            tuple(sorted((e, c) for e, c in acc.items() if c and e < prec)), prec
        )

    __radd__ = __add__

    def __neg__(self):
        return PuiseuxSeries._raw(tuple((e, -c) for e, c in self.terms), self.prec)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return PuiseuxSeries._raw((), EXACT)
            c = _frac(other)
            return PuiseuxSeries._raw(tuple((e, v * c) for e, v in self.terms), self.prec)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        prec = min(self.val_lower + other.prec, other.val_lower + self.prec)
        acc: dict = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = e1 + e2
                if e < prec:
                    acc[e] = acc.get(e, 0) + c1 * c2
        return PuiseuxSeries._raw(tuple(sorted((e, c) for e, c in acc.items() if c)), prec)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only natural powers")
        result = PuiseuxSeries.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self, order=None) -> "PuiseuxSeries":
        if not self.terms:
            raise Indeterminate("indeterminate divisor: series is zero up to truncation")
        v0, c0 = self.terms[0]
        if len(self.terms) == 1 and self.prec == EXACT:
            return PuiseuxSeries._raw(((-v0, 1 / c0),), EXACT)
        order = _frac(order) if order is not None else default_truncation()
        # self = c0 t^v0 (1 + r) with v(r) > 0; invert 1 + r geometrically
        r = PuiseuxSeries._raw(
            tuple((e - v0, c / c0) for e, c in self.terms[1:]),
            self.prec - v0 if self.prec != EXACT else EXACT,
        )
        rel = min(r.prec, order)
        acc = PuiseuxSeries.const(1).truncate(rel)
        power = PuiseuxSeries.const(1)
        if r.terms:
            vr = r.terms[0][0]
            k = 0
            while k * vr < rel:
                k += 1
                power = (power * (-r)).truncate(rel)
                acc = acc + power
        return acc.shift(-v0) * (1 / c0)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def shift(self, e) -> "PuiseuxSeries":
        """Multiply by ``t^e`` exactly."""
        e = _frac(e)
        return PuiseuxSeries._raw(
            tuple((x + e, c) for x, c in self.terms),
            self.prec + e if self.prec != EXACT else EXACT,
        )

    # -- identity ---------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = PuiseuxSeries.const(other)
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        return self.terms == other.terms and self.prec == other.prec

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.terms, self.prec))
        return self._hash

    def to_literal(self) -> str:
        parts = []
        for idx, (e, c) in enumerate(self.terms):
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if e == 0:
                body = _fmt_q(a)
            else:
                tpart = "t" if e == 1 else (f"t^{e}" if e.denominator == 1 and e > 0 else f"t^({e})")
                body = tpart if a == 1 else f"{_fmt_q(a)}*{tpart}"
            if idx == 0:
                parts.append(("-" if sign == "-" else "") + body)
            else:
                parts.append(f" {sign} {body}")
        if self.prec != EXACT:
            o = f"O(t^{self.prec})" if self.prec.denominator == 1 and self.prec >= 0 else f"O(t^({self.prec}))"
            parts.append(f" + {o}" if parts else o)
        return "".join(parts) or "0"

    def __str__(self):
        return self.to_literal()

    def __repr__(self):
        return f"PuiseuxSeries({self.to_literal()!r})"


def _fmt_q(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"({c.numerator}/{c.denominator})"


_SERIES_TERM = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
    (?:
        (?P<big>O)\(\s*t(?:\s*\^\s*\(?\s*(?P<oexp>-?\d+(?:/\d+)?)\s*\)?)?\s*\)
      | (?P<coef>\(?\s*\d+(?:/\d+)?\s*\)?)?\s*\*?\s*
        (?P<t>t(?:\s*\^\s*(?:\(\s*(?P<pexp>-?\d+(?:/\d+)?)\s*\)|(?P<exp>\d+(?:/\d+)?)))?)?
    )\s*""",
    re.VERBOSE,
)


def parse_series(text: str) -> PuiseuxSeries:
    """Parse literals such as ``3*t^(1/2) + t - 2*t^(5/2) + O(t^8)``."""
    pos = 0
    terms = []
    prec = EXACT
    text = text.strip()
    if not text:
        raise ValueError("empty series literal")
    while pos < len(text):
        m = _SERIES_TERM.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"bad series literal near {text[pos:]!r}")
        if m.group("big"):
            prec = Fraction(m.group("oexp") or 1)
        else:
            coef = m.group("coef")
            tpart = m.group("t")
            if coef is None and tpart is None:
                raise ValueError(f"bad series literal near {text[pos:]!r}")
            c = Fraction(coef.strip("() ")) if coef else Fraction(1)
            if tpart is None:
                e = Fraction(0)
            else:
                ex = m.group("pexp") or m.group("exp")
                e = Fraction(ex) if ex else Fraction(1)
            if m.group("sign") == "-":
                c = -c
            terms.append((e, c))
        pos = m.end()
    return PuiseuxSeries(terms, prec)


class PuiseuxPoint:
    """A tuple of series: a point of R^n, or a curve in t."""

    __slots__ = ("coords",)

    def __init__(self, coords: Sequence):
        self.coords = tuple(
            c if isinstance(c, PuiseuxSeries) else
            (parse_series(c) if isinstance(c, str) else PuiseuxSeries.const(c))
            for c in coords
        )

    @classmethod
    def from_rational(cls, p: Sequence) -> "PuiseuxPoint":
        return cls([PuiseuxSeries.const(Fraction(v)) for v in p])

    @property
    def truncation_order(self):
        return min((c.prec for c in self.coords), default=EXACT)

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def _check(self, other):
        if len(other) != len(self):
            raise DimensionError("points of different dimension")

    def __add__(self, other):
        other = other if isinstance(other, PuiseuxPoint) else PuiseuxPoint(other)
        self._check(other)
        return PuiseuxPoint([a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other):
        other = other if isinstance(other, PuiseuxPoint) else PuiseuxPoint(other)
        self._check(other)
        return PuiseuxPoint([a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self):
        return PuiseuxPoint([-a for a in self.coords])

    def scale(self, s) -> "PuiseuxPoint":
        return PuiseuxPoint([a * s for a in self.coords])

    def shift(self, e) -> "PuiseuxPoint":
        return PuiseuxPoint([a.shift(e) for a in self.coords])

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coords)

    def __eq__(self, other):
        if not isinstance(other, PuiseuxPoint):
            return NotImplemented
        return self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def to_literal(self) -> str:
        return "(" + ", ".join(c.to_literal() for c in self.coords) + ")"

    def __repr__(self):
        return f"PuiseuxPoint({self.to_literal()})"


# -- valuation-theoretic maps -----------------------------------------------

def ps_arith(op: str, a: PuiseuxSeries, b: PuiseuxSeries) -> PuiseuxSeries:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def valuation(a: PuiseuxSeries):
    """Least exponent, or :data:`INF` (flagged ``truncated`` if only zero so far)."""
    if a.terms:
        return a.terms[0][0]
    return Inf(truncated=not a.is_exact)


def vhat(x: PuiseuxPoint):
    """Minimum coordinate valuation; raises :class:`Indeterminate` if truncation hides it."""
    best = None
    bound = EXACT  # least truncation among coordinates with no known term
    for c in x:
        if c.terms:
            v = c.terms[0][0]
            best = v if best is None else min(best, v)
        elif not c.is_exact:
            bound = min(bound, c.prec)
    if best is None:
        if bound == EXACT:
            return INF
        raise Indeterminate(f"point is zero up to O(t^{bound})")
    if best < bound:
        return best
    raise Indeterminate(f"valuation undecided at truncation O(t^{bound})")


def residue(a: PuiseuxSeries) -> Fraction:
    if a.terms and a.terms[0][0] < 0:
        raise NotInValuationRing(f"{a.to_literal()} has negative valuation")
    if not a.terms and not a.is_exact and a.prec <= 0:
        raise Indeterminate("residue beyond truncation")
    return a.coeff_at(0) if a.prec > 0 else Fraction(0)


@dataclass(frozen=True)
class RvClass:
    gamma: object  # Fraction or INF
    leading_residue: tuple

    @property
    def is_zero(self) -> bool:
        return isinstance(self.gamma, Inf)

    def to_json(self):
        if self.is_zero:
            return {"gamma": "inf", "leading": []}
        return {"gamma": str(self.gamma), "leading": [str(c) for c in self.leading_residue]}


def rvhat(x: PuiseuxPoint) -> RvClass:
    g = vhat(x)
    if isinstance(g, Inf):
        return RvClass(INF, ())
    return RvClass(g, tuple(c.coeff_at(g) for c in x))


@dataclass(frozen=True)
class Direction:
    """A point of projective space over the residue field, first nonzero entry 1."""

    coords: tuple

    def __post_init__(self):
        cs = tuple(Fraction(c) for c in self.coords)
        piv = next((c for c in cs if c), None)
        if piv is None:
            raise ValueError("the zero vector has no direction")
        object.__setattr__(self, "coords", tuple(c / piv for c in cs))

    def __str__(self):
        return "[" + " : ".join(str(c) for c in self.coords) + "]"


def direction(x: PuiseuxPoint) -> Direction:
    rv = rvhat(x)
    if rv.is_zero:
        raise ValueError("direction of the zero point is undefined")
    return Direction(rv.leading_residue)


@dataclass(frozen=True)
class Ball:
    center: PuiseuxPoint
    radius: Fraction
    kind: str = "open"  # "open": vhat(x - a) > radius; "closed": >=

    def __post_init__(self):
        if self.kind not in ("open", "closed"):
            raise ValueError("ball kind must be 'open' or 'closed'")
        object.__setattr__(self, "radius", Fraction(self.radius))


def ball_contains(B: Ball, x: PuiseuxPoint) -> Verdict3:
    if len(x) != len(B.center):
        raise DimensionError("point and ball differ in dimension")
    d = x - B.center
    try:
        v = vhat(d)
    except Indeterminate as exc:
        # every coordinate is known to have valuation >= its truncation
        lower = min(c.val_lower for c in d)
        if lower > B.radius or (B.kind == "closed" and lower >= B.radius):
            return TRUE
        return unknown(str(exc))
    if isinstance(v, Inf):
        return TRUE
    ok = v > B.radius if B.kind == "open" else v >= B.radius
    return TRUE if ok else FALSE


def ps_limit(curve: PuiseuxPoint) -> tuple[Fraction, ...]:
    """Limit as ``t -> 0+`` of a bounded curve: its tuple of residues."""
    out = []
    for c in curve:
        if c.terms and c.terms[0][0] < 0:
            raise UnboundedCurve(f"coordinate {c.to_literal()} is unbounded as t -> 0+")
        out.append(residue(c))
    return tuple(out)


# -- risometries ------------------------------------------------------------

def apply_map(phi, x: PuiseuxPoint) -> PuiseuxPoint:
    if callable(phi):
        return phi(x)
    return PuiseuxPoint([f.evaluate(list(x.coords)) for f in phi])


@dataclass
class RisometryReport:
    verdicts: list = field(default_factory=list)
    passed: int = 0
    failed: int = 0
    indeterminate: int = 0
    isometry_ok: bool = True
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.failed == 0 and self.indeterminate == 0

    def to_json(self):
        return {
            "passed": self.passed,
            "failed": self.failed,
            "indeterminate": self.indeterminate,
            "isometry_ok": self.isometry_ok,
            "notes": list(self.notes),
        }


def risometry_check(phi, sample_pairs) -> RisometryReport:
    """Check ``rvhat(phi(x) - phi(y)) == rvhat(x - y)`` on each sample pair.

    ``phi`` is a tuple of :class:`~tangentcone.poly.Polynomial` or a callable
    on :class:`PuiseuxPoint`.
    """
    rep = RisometryReport()
    for x, y in sample_pairs:
        fx, fy = apply_map(phi, x), apply_map(phi, y)
        common = min(x.truncation_order, y.truncation_order)
        got = min(fx.truncation_order, fy.truncation_order)
        if got < common:
            rep.notes.append(f"precision loss: O(t^{common}) -> O(t^{got})")
        try:
            lhs = rvhat(fx - fy)
            rhs = rvhat(x - y)
        except Indeterminate as exc:
            rep.verdicts.append(("indeterminate", str(exc)))
            rep.indeterminate += 1
            continue
        if lhs == rhs:
            rep.verdicts.append(("pass", ""))
            rep.passed += 1
        else:
            rep.verdicts.append(("fail", f"{lhs} != {rhs}"))
            rep.failed += 1
        if lhs.gamma != rhs.gamma:
            rep.isometry_ok = False
    return rep
