"""Exact multivariate polynomials over the rationals.

A :class:`Polynomial` is an immutable sparse map from exponent tuples to
nonzero :class:`fractions.Fraction` coefficients.  Terms are stored in a
canonical order (descending total degree, then descending lexicographic
exponent) so that structural equality coincides with mathematical equality.

Evaluation is generic: :meth:`Polynomial.evaluate` works for any ring
elements supporting ``+`` and ``*`` with rationals (Fractions, floats,
:class:`~tangentcone.puiseux.PuiseuxSeries`).
"""
from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Iterable, Mapping, Sequence

__all__ = [
    "Polynomial",
    "NEG_INF",
    "DimensionError",
    "poly_arith",
    "translate",
    "initial_form",
    "gradient",
    "eval_rational",
    "default_names",
]


class _NegInf:
    """Degree of the zero polynomial; compares below every integer."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __lt__(self, other):
        return other is not self

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return other is self

    def __repr__(self):
        return "NEG_INF"


NEG_INF = _NegInf()


class DimensionError(ValueError):
    """Operands live in different ambient dimensions."""


def default_names(n: int) -> tuple[str, ...]:
    if n <= 3:
        return ("x", "y", "z")[:n]
    return tuple(f"x{i + 1}" for i in range(n))


def _key(exp):
    return (-sum(exp), tuple(-e for e in exp))


class Polynomial:
    __slots__ = ("nvars", "terms", "_dict", "_hash")

    def __init__(self, nvars: int, terms: Mapping[tuple, object] | Iterable = ()):
        if nvars < 1:
            raise ValueError("a polynomial needs at least one variable")
        acc: dict[tuple, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for exp, c in items:
            exp = tuple(int(e) for e in exp)
            if len(exp) != nvars or any(e < 0 for e in exp):
                raise DimensionError(f"bad exponent {exp} for {nvars} variables")
            c = Fraction(c)
            if c:
                acc[exp] = acc.get(exp, 0) + c
        acc = {e: c for e, c in acc.items() if c}
        self.nvars = nvars
        self._dict = acc
        self.terms = tuple(sorted(acc.items(), key=lambda t: _key(t[0])))
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def const(cls, nvars: int, c) -> "Polynomial":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars: int, i: int) -> "Polynomial":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls(nvars)

    # -- basic queries ------------------------------------------------
    def is_zero(self) -> bool:
        return not self._dict

    def coeff(self, exp) -> Fraction:
        return self._dict.get(tuple(exp), Fraction(0))

    def as_dict(self) -> dict:
        return dict(self._dict)

    @property
    def degree(self):
        if not self._dict:
            return NEG_INF
        return max(sum(e) for e in self._dict)

    @property
    def min_degree(self):
        if not self._dict:
            return NEG_INF
        return min(sum(e) for e in self._dict)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self._dict), default=0)

    def variables(self) -> set[int]:
        return {i for e in self._dict for i, k in enumerate(e) if k}

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._dict)

    def constant_term(self) -> Fraction:
        return self.coeff((0,) * self.nvars)

    def homogeneous_part(self, d: int) -> "Polynomial":
        return Polynomial(self.nvars, {e: c for e, c in self._dict.items() if sum(e) == d})

    # -- arithmetic ---------------------------------------------------
    def _check(self, other: "Polynomial"):
        if self.nvars != other.nvars:
            raise DimensionError(f"ambient dimensions differ: {self.nvars} vs {other.nvars}")

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.const(self.nvars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc = dict(self._dict)
        for e, c in other._dict.items():
            acc[e] = acc.get(e, 0) + c
        return Polynomial(self.nvars, acc)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.nvars, {e: -c for e, c in self._dict.items()})

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
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc: dict[tuple, Fraction] = {}
        for e1, c1 in self._dict.items():
            for e2, c2 in other._dict.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                acc[e] = acc.get(e, 0) + c1 * c2
        return Polynomial(self.nvars, acc)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a natural number")
        result = Polynomial.const(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c) -> "Polynomial":
        c = Fraction(c)
        return Polynomial(self.nvars, {e: c * v for e, v in self._dict.items()})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.const(self.nvars, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, self.terms))
        return self._hash

    # -- calculus and substitution -------------------------------------
    def diff(self, i: int) -> "Polynomial":
        acc = {}
        for e, c in self._dict.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                acc[tuple(e2)] = c * e[i]
        return Polynomial(self.nvars, acc)

    def evaluate(self, point: Sequence, one=None):
        """Evaluate at ``point`` whose entries are ring elements.

        ``one`` is the multiplicative identity of the target ring; by default
        the result of the first coordinate's ``**0`` is used, which works for
        Fractions, floats and Puiseux series alike.
        """
        if len(point) != self.nvars:
            raise DimensionError(f"point has {len(point)} coordinates, expected {self.nvars}")
        if one is None:
            one = point[0] ** 0 if self.nvars else Fraction(1)
        # cache powers per coordinate
        powers: list[dict[int, object]] = [{0: one} for _ in range(self.nvars)]

        def pw(i, k):
            d = powers[i]
            if k not in d:
                d[k] = pw(i, k - 1) * point[i]
            return d[k]

        total = one * 0
        for e, c in self.terms:
            m = one * c
            for i, k in enumerate(e):
                if k:
                    m = m * pw(i, k)
            total = total + m
        return total

    def compose(self, subs: Sequence["Polynomial"]) -> "Polynomial":
        """Substitute polynomial ``subs[i]`` for variable ``i``."""
        if len(subs) != self.nvars:
            raise DimensionError("need one substitution per variable")
        m = subs[0].nvars
        return self.evaluate(list(subs), one=Polynomial.const(m, 1))

    def taylor_in(self, i: int) -> list["Polynomial"]:
        """Coefficients ``A_j`` with ``f(x + u e_i) = sum_j A_j(x) u^j``."""
        d = self.degree_in(i)
        out = [Polynomial.zero(self.nvars) for _ in range(d + 1)]
        acc: list[dict] = [dict() for _ in range(d + 1)]
        for e, c in self._dict.items():
            k = e[i]
            for j in range(k + 1):
                e2 = list(e)
                e2[i] = k - j
                key = tuple(e2)
                acc[j][key] = acc[j].get(key, 0) + c * comb(k, j)
        for j in range(d + 1):
            out[j] = Polynomial(self.nvars, acc[j])
        return out

    # -- printing -----------------------------------------------------
    def to_str(self, names: Sequence[str] | None = None) -> str:
        names = tuple(names) if names else default_names(self.nvars)
        if not self._dict:
            return "0"
        parts = []
        for idx, (e, c) in enumerate(self.terms):
            mono = "*".join(
                names[i] if k == 1 else f"{names[i]}^{k}" for i, k in enumerate(e) if k
            )
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if mono:
                body = mono if a == 1 else f"{_fmt(a)}*{mono}"
            else:
                body = _fmt(a)
            if idx == 0:
                parts.append(("-" if sign == "-" else "") + body)
            else:
                parts.append(f" {sign} {body}")
        return "".join(parts)

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"Polynomial({self.nvars}, {self.to_str()!r})"


def _fmt(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"({c.numerator}/{c.denominator})"


def poly_arith(op: str, f: Polynomial, g: Polynomial) -> Polynomial:
    if not isinstance(f, Polynomial) or not isinstance(g, Polynomial):
        raise TypeError("poly_arith expects two polynomials")
    f._check(g)
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown operation {op!r}")


def translate(f: Polynomial, p: Sequence) -> Polynomial:
    """Return ``g`` with ``g(x) = f(x + p)``."""
    if len(p) != f.nvars:
        raise DimensionError(f"shift has {len(p)} entries, expected {f.nvars}")
    p = [Fraction(v) for v in p]
    if not any(p):
        return f
    n = f.nvars
    subs = [Polynomial.var(n, i) + p[i] for i in range(n)]
    return f.compose(subs)


def initial_form(f: Polynomial) -> Polynomial:
    """Lowest-degree homogeneous component."""
    if f.is_zero():
        raise ValueError("the zero polynomial has no initial form")
    return f.homogeneous_part(f.min_degree)


def gradient(f: Polynomial) -> tuple[Polynomial, ...]:
    return tuple(f.diff(i) for i in range(f.nvars))


def eval_rational(f: Polynomial, x: Sequence) -> Fraction:
    if len(x) != f.nvars:
        raise DimensionError(f"point has {len(x)} coordinates, expected {f.nvars}")
    return Fraction(f.evaluate([Fraction(v) for v in x], one=Fraction(1)))
