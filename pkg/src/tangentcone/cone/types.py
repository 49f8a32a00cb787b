"""Queries, verdicts and finite unions of rays."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from ..poly import DimensionError, Polynomial
from ..realroots import RealAlgebraic
from ..semialg import Atom, SemialgebraicSet, conj, disj, Not

__all__ = ["ConeQuery", "ConeVerdict", "Ray", "RaySet", "SUPPORTED", "UNSUPPORTED", "INDETERMINATE"]

SUPPORTED = "supported"
UNSUPPORTED = "unsupported"
INDETERMINATE = "indeterminate"


def _q(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, float):
        return Fraction(v).limit_denominator(10**12)
    return Fraction(v)


@dataclass(frozen=True)
class ConeQuery:
    X: SemialgebraicSet
    p: tuple
    y: tuple

    def __init__(self, X: SemialgebraicSet, p: Sequence, y: Sequence):
        n = X.ambient_dim
        p = tuple(_q(v) for v in (p if len(p) else [0] * n))
        y = tuple(_q(v) for v in y)
        if len(p) != n or len(y) != n:
            raise DimensionError(f"query dimensions differ from R^{n}")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "y", y)

    @property
    def is_zero(self) -> bool:
        return not any(self.y)


@dataclass
class ConeVerdict:
    status: str
    engine: str
    certified: bool = False
    witness: dict | None = None
    reason: str = ""

    @property
    def supported(self) -> bool:
        return self.status == SUPPORTED

    @property
    def determinate(self) -> bool:
        """Supported, or unsupported with a certificate."""
        return self.status == SUPPORTED or (self.status == UNSUPPORTED and self.certified)

    def to_json(self) -> dict:
        out = {"status": self.status, "engine": self.engine, "certified": self.certified}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.reason:
            out["reason"] = self.reason
        return out


def _cmp_coord(a, b) -> bool:
    if isinstance(a, RealAlgebraic) or isinstance(b, RealAlgebraic):
        x, y = (a, b) if isinstance(a, RealAlgebraic) else (b, a)
        return x == y
    return a == b


@dataclass(frozen=True)
class Ray:
    """``{lam * vector : lam > 0}``; the first nonzero entry of ``vector`` is +-1."""

    vector: tuple

    def __init__(self, vector: Sequence):
        vec = list(vector)
        piv = next((c for c in vec if (c != 0)), None)
        if piv is None:
            raise ValueError("a ray needs a nonzero vector")
        if isinstance(piv, RealAlgebraic):
            raise ValueError("the first nonzero coordinate must be rational")
        scale = abs(Fraction(piv))
        vec = [c if scale == 1 else (c * (1 / scale) if not isinstance(c, RealAlgebraic) else _scale_alg(c, 1 / scale)) for c in vec]
        object.__setattr__(self, "vector", tuple(vec))

    @property
    def side(self) -> int:
        piv = next(c for c in self.vector if c != 0)
        return 1 if piv > 0 else -1

    @property
    def is_rational(self) -> bool:
        return all(not isinstance(c, RealAlgebraic) or c.is_rational() for c in self.vector)

    def rational_vector(self) -> tuple:
        return tuple(c.value if isinstance(c, RealAlgebraic) else c for c in self.vector)

    def float_vector(self) -> tuple:
        return tuple(float(c) for c in self.vector)

    def same(self, other: "Ray") -> bool:
        return len(self.vector) == len(other.vector) and all(
            _cmp_coord(a, b) for a, b in zip(self.vector, other.vector)
        )

    def contains(self, y: Sequence, tol: float = 0.0) -> bool:
        """Whether ``y`` is a positive multiple of the ray vector."""
        if self.is_rational and tol == 0.0:
            v = self.rational_vector()
            y = [Fraction(c) for c in y]
            i = next(i for i, c in enumerate(v) if c)
            if y[i] == 0 or (y[i] > 0) != (v[i] > 0):
                return False
            lam = y[i] / v[i]
            return all(y[j] == lam * v[j] for j in range(len(v)))
        v = self.float_vector()
        yf = [float(c) for c in y]
        ny = sum(c * c for c in yf) ** 0.5
        nv = sum(c * c for c in v) ** 0.5
        if ny == 0:
            return False
        dot = sum(a * b for a, b in zip(v, yf)) / (nv * ny)
        return dot > 0 and (1 - dot) <= max(tol, 1e-12)

    def to_json(self):
        return [c.to_json() if isinstance(c, RealAlgebraic) else str(c) for c in self.vector]

    def __str__(self):
        return "(" + ", ".join(str(c) if not isinstance(c, RealAlgebraic) else f"{float(c):.12g}" for c in self.vector) + ")"


def _scale_alg(c: RealAlgebraic, f: Fraction) -> RealAlgebraic:
    if c.is_rational():
        return RealAlgebraic.from_rational(c.value * f)
    # root of p(x / f)
    p = [coef / f**i for i, coef in enumerate(c.poly)]
    lo, hi = sorted((c.lo * f, c.hi * f))
    return RealAlgebraic(p, lo, hi)


@dataclass
class RaySet:
    """A finite union of open rays, optionally with the apex, optionally complemented.

    A tangent cone that is a finite union of closed rays is a RaySet with
    ``apex=True``; set differences of such cones are again RaySets.
    """

    n: int
    rays: list = field(default_factory=list)
    apex: bool = True
    complement: bool = False
    # rays that could not be certified either way (kept out of ``rays``)
    undetermined: list = field(default_factory=list)

    def __post_init__(self):
        uniq: list[Ray] = []
        for r in self.rays:
            if len(r.vector) != self.n:
                raise DimensionError("ray dimension mismatch")
            if not any(r.same(u) for u in uniq):
                uniq.append(r)
        self.rays = sorted(uniq, key=_ray_key)
        und: list[Ray] = []
        for r in self.undetermined:
            if not any(r.same(u) for u in uniq + und):
                und.append(r)
        self.undetermined = sorted(und, key=_ray_key)

    @classmethod
    def empty(cls, n: int) -> "RaySet":
        return cls(n, [], False)

    @classmethod
    def everything(cls, n: int) -> "RaySet":
        return cls(n, [], False, True)

    @property
    def is_empty(self) -> bool:
        return not self.complement and not self.rays and not self.apex

    def contains(self, y: Sequence, tol: float = 0.0) -> bool:
        if not any(c != 0 for c in y):
            inside = self.apex
        else:
            inside = any(r.contains(y, tol) for r in self.rays)
        return inside != self.complement

    def _plain(self):
        if self.complement:
            raise ValueError("complemented ray sets support only complement()")

    def union(self, other: "RaySet") -> "RaySet":
        self._plain()
        other._plain()
        return RaySet(self.n, self.rays + other.rays, self.apex or other.apex, False, self.undetermined + other.undetermined)

    def difference(self, other: "RaySet") -> "RaySet":
        """``self \\ other``; ``self`` may be the whole space."""
        other._plain()
        if self.complement:
            if self.rays or self.apex:
                raise ValueError("unsupported difference")
            return RaySet(self.n, other.rays, other.apex, True)
        rays = [r for r in self.rays if not any(r.same(o) for o in other.rays)]
        return RaySet(self.n, rays, self.apex and not other.apex)

    def dimension(self) -> int:
        if self.complement:
            return self.n
        if self.rays:
            return 1
        return 0 if self.apex else -1

    def to_set(self, names: Sequence[str]) -> SemialgebraicSet | None:
        """An exact formula for the set (None if some ray is irrational)."""
        if any(not r.is_rational for r in self.rays):
            return None
        n = self.n
        pieces = []
        used = set()
        vecs = [r.rational_vector() for r in self.rays]
        for i, v in enumerate(vecs):
            if i in used:
                continue
            neg = tuple(-c for c in v)
            j = next((j for j in range(i + 1, len(vecs)) if j not in used and vecs[j] == neg), None)
            eqs, lead = _line_atoms(v, n)
            if j is not None:
                used.add(j)
                if self.apex:
                    pieces.append(conj(*eqs) if eqs else _true(n))
                else:
                    pieces.append(conj(Atom(lead, "!="), *eqs))
            else:
                pieces.append(conj(Atom(lead, ">=" if self.apex else ">"), *eqs))
            used.add(i)
        if self.apex and not pieces:
            pieces.append(conj(*[Atom(Polynomial.var(n, i), "=") for i in range(n)]))
        if not pieces:
            formula = Atom(Polynomial.const(n, 1), "=")
        else:
            formula = disj(*pieces)
        if self.complement:
            formula = Not(formula)
        return SemialgebraicSet(formula, tuple(names))

    def to_json(self) -> dict:
        return {
            "rays": [r.to_json() for r in self.rays],
            "apex": self.apex,
            "complement": self.complement,
            "dimension": self.dimension(),
            "undetermined": [r.to_json() for r in self.undetermined],
        }


def _true(n: int):
    return Atom(Polynomial.zero(n), "=")


def _line_atoms(v: tuple, n: int):
    i = next(i for i, c in enumerate(v) if c)
    xi = Polynomial.var(n, i)
    eqs = []
    for j in range(n):
        if j == i:
            continue
        g = Polynomial.var(n, j).scale(v[i]) - xi.scale(v[j])
        if v[i] < 0:
            g = -g
        eqs.append(Atom(g.scale(1 / abs(v[i])), "="))
    lead = xi if v[i] > 0 else -xi
    return eqs, lead


def _ray_key(r: Ray):
    return tuple(-float(c) for c in r.vector)
