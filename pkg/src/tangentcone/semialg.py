"""Semialgebraic sets: formulas over polynomial sign conditions.

Sets are boolean combinations of atoms ``g rel 0``.  They can be evaluated
at rational points (exactly), at float points (with a scale-aware equality
tolerance) and at Puiseux points (three-valued, truncation aware).  The
module also samples points of a set near a base point and estimates local
dimension and tangent spaces from Jacobians.
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import kernels
from .logic import FALSE, TRUE, Indeterminate, Verdict3, unknown
from .parsing import ParseError, TokenStream, VarTable, build_poly, parse_poly_raw
from .poly import DimensionError, Polynomial, default_names, translate
from .puiseux import PuiseuxPoint

__all__ = [
    "RELATIONS",
    "Atom",
    "And",
    "Or",
    "Not",
    "SemialgebraicSet",
    "parse_set",
    "print_set",
    "eval_real",
    "eval_puiseux",
    "dnf",
    "nnf",
    "split_weak",
    "Conjunct",
    "SampleResult",
    "sample_near",
    "DimEstimate",
    "local_dimension_estimate",
    "tangent_space",
    "SingularSample",
    "FLOAT_TOL",
]

RELATIONS = ("<", "<=", "=", ">=", ">", "!=")
_NEGATE = {"<": ">=", "<=": ">", "=": "!=", ">=": "<", ">": "<=", "!=": "="}
FLOAT_TOL = 1e-9


def rel_holds(sign: int, rel: str) -> bool:
    return {
        "<": sign < 0,
        "<=": sign <= 0,
        "=": sign == 0,
        ">=": sign >= 0,
        ">": sign > 0,
        "!=": sign != 0,
    }[rel]


# -- formula AST --------------------------------------------------------------

@dataclass(frozen=True)
class Atom:
    poly: Polynomial
    rel: str

    def negate(self) -> "Atom":
        return Atom(self.poly, _NEGATE[self.rel])

    def to_str(self, names) -> str:
        return f"{self.poly.to_str(names)} {self.rel} 0"


@dataclass(frozen=True)
class And:
    args: tuple


@dataclass(frozen=True)
class Or:
    args: tuple


@dataclass(frozen=True)
class Not:
    arg: object


def conj(*args):
    flat = []
    for a in args:
        flat.extend(a.args if isinstance(a, And) else (a,))
    return flat[0] if len(flat) == 1 else And(tuple(flat))


def disj(*args):
    flat = []
    for a in args:
        flat.extend(a.args if isinstance(a, Or) else (a,))
    return flat[0] if len(flat) == 1 else Or(tuple(flat))


def _atoms(F):
    if isinstance(F, Atom):
        yield F
    elif isinstance(F, Not):
        yield from _atoms(F.arg)
    else:
        for a in F.args:
            yield from _atoms(a)


def _map_atoms(F, fn):
    if isinstance(F, Atom):
        return fn(F)
    if isinstance(F, Not):
        return Not(_map_atoms(F.arg, fn))
    return type(F)(tuple(_map_atoms(a, fn) for a in F.args))


def _fmt(F, names, parent: str) -> str:
    if isinstance(F, Atom):
        return F.to_str(names)
    if isinstance(F, Not):
        return "!(" + _fmt(F.arg, names, "not") + ")"
    if isinstance(F, And):
        s = " && ".join(_fmt(a, names, "and") for a in F.args)
        return s
    s = " || ".join(_fmt(a, names, "or") for a in F.args)
    return f"({s})" if parent == "and" else s


@dataclass(frozen=True)
class SemialgebraicSet:
    formula: object
    names: tuple

    @property
    def ambient_dim(self) -> int:
        return len(self.names)

    def atoms(self) -> list[Atom]:
        return list(_atoms(self.formula))

    def translate(self, p: Sequence) -> "SemialgebraicSet":
        """The set moved so that ``p`` becomes the origin."""
        return SemialgebraicSet(_map_atoms(self.formula, lambda a: Atom(translate(a.poly, p), a.rel)), self.names)

    def union(self, other: "SemialgebraicSet") -> "SemialgebraicSet":
        self._check(other)
        return SemialgebraicSet(disj(self.formula, other.formula), self.names)

    def intersection(self, other: "SemialgebraicSet") -> "SemialgebraicSet":
        self._check(other)
        return SemialgebraicSet(conj(self.formula, other.formula), self.names)

    def complement(self) -> "SemialgebraicSet":
        return SemialgebraicSet(Not(self.formula), self.names)

    def _check(self, other):
        if self.names != other.names:
            raise DimensionError(f"sets live in different spaces: {self.names} vs {other.names}")

    def formula_str(self) -> str:
        return _fmt(self.formula, self.names, "top")

    def __str__(self):
        return print_set(self)


def print_set(S: SemialgebraicSet) -> str:
    return f"vars {','.join(S.names)}; {S.formula_str()}"


# -- parsing ----------------------------------------------------------------------

_ARITH = ("+", "-", "*", "/", "^")
_RELTOK = ("<", "<=", "=", "==", ">=", ">", "!=")


def _p_expr(ts, vt):
    node = _p_term(ts, vt)
    args = [node]
    while ts.at("||"):
        ts.take()
        args.append(_p_term(ts, vt))
    return args[0] if len(args) == 1 else ("or", args)


def _p_term(ts, vt):
    args = [_p_atomneg(ts, vt)]
    while ts.at("&&"):
        ts.take()
        args.append(_p_atomneg(ts, vt))
    return args[0] if len(args) == 1 else ("and", args)


def _p_atomneg(ts, vt):
    if ts.at("!"):
        ts.take()
        return ("not", _p_atomneg(ts, vt))
    if ts.at("("):
        save = ts.i
        try:
            ts.take()
            node = _p_expr(ts, vt)
            ts.expect(")")
            if not (ts.at(*_ARITH) or ts.at(*_RELTOK)):
                return node
        except ParseError:
            pass
        ts.i = save  # it was a parenthesised polynomial
    return _p_atom(ts, vt)


def _p_atom(ts, vt):
    lhs = parse_poly_raw(ts, vt)
    if not ts.at(*_RELTOK):
        ts.error(f"expected a relation, found {ts.cur.value or 'end of input'!r}")
    rel = ts.take().value
    rel = "=" if rel == "==" else rel
    rhs = parse_poly_raw(ts, vt)
    return ("atom", ("sub", lhs, rhs), rel)


def _build(node, n):
    kind = node[0]
    if kind == "atom":
        return Atom(build_poly(node[1], n), node[2])
    if kind == "not":
        return Not(_build(node[1], n))
    if kind == "and":
        return conj(*(_build(a, n) for a in node[1]))
    return disj(*(_build(a, n) for a in node[1]))


def _parse_header(ts: TokenStream) -> list[str] | None:
    if ts.cur.kind == "NAME" and ts.cur.value == "vars" and ts.peek().kind == "NAME":
        ts.take()
        names = [ts.expect_kind("NAME").value]
        while ts.at(","):
            ts.take()
            names.append(ts.expect_kind("NAME").value)
        ts.expect(";")
        if len(set(names)) != len(names):
            ts.error("duplicate variable in header")
        return names
    return None


def _order_names(found: list[str]) -> list[str]:
    # x,y,z (or x1..xn) are completed to a prefix so "y = 0" lives in the plane
    for n in range(1, 4):
        std = list(default_names(n))
        if set(found) <= set(std) and found:
            k = max(std.index(v) for v in found) + 1
            return std[:k]
    if found and all(v[0] == "x" and v[1:].isdigit() and int(v[1:]) >= 1 for v in found):
        k = max(int(v[1:]) for v in found)
        return [f"x{i}" for i in range(1, k + 1)]
    return found


def parse_formula(ts: TokenStream, vt: VarTable):
    """Parse a formula at the stream position; returns the raw tree."""
    return _p_expr(ts, vt)


def parse_set(text: str, names: Sequence[str] | None = None) -> SemialgebraicSet:
    """Parse ``[vars a,b,...;] formula``.

    Without a header (or ``names``) the variables are collected by first
    use; ``x, y, z`` and ``x1..xn`` are completed to an initial segment.
    """
    ts = TokenStream(text)
    header = _parse_header(ts)
    if header is not None and names is not None and tuple(header) != tuple(names):
        raise ParseError(f"header declares {header}, expected {list(names)}")
    declared = header if header is not None else (list(names) if names is not None else None)
    if declared is not None:
        vt = VarTable(declared, frozen=True)
    else:
        vt = VarTable()
    raw = _p_expr(ts, vt)
    if ts.cur.kind != "EOF":
        ts.error(f"unexpected {ts.cur.value!r}")
    if declared is None:
        ordered = _order_names(vt.names) or ["x"]
        remap = [ordered.index(v) for v in vt.names]
        raw = _remap(raw, remap)
        final = ordered
    else:
        final = declared
    return SemialgebraicSet(_build(raw, len(final)), tuple(final))


def _remap(node, remap):
    if isinstance(node, tuple):
        if node and node[0] == "var":
            return ("var", remap[node[1]])
        return tuple(_remap(x, remap) for x in node)
    if isinstance(node, list):
        return [_remap(x, remap) for x in node]
    return node


# -- evaluation -----------------------------------------------------------------

def _exact_point(x) -> bool:
    return all(isinstance(v, (int, Fraction)) for v in x)


def float_sign(poly: Polynomial, x: Sequence[float], tol: float = FLOAT_TOL) -> int:
    """Sign of ``poly`` at a float point; zero within ``tol`` times the term magnitude."""
    val = 0.0
    mag = 0.0
    for e, c in poly.terms:
        t = float(c)
        for xi, k in zip(x, e):
            if k:
                t *= xi**k
        val += t
        mag += abs(t)
    if abs(val) <= tol * mag:
        return 0
    return 1 if val > 0 else -1


def _eval_bool(F, atom_value):
    if isinstance(F, Atom):
        return atom_value(F)
    if isinstance(F, Not):
        return not _eval_bool(F.arg, atom_value)
    if isinstance(F, And):
        return all(_eval_bool(a, atom_value) for a in F.args)
    return any(_eval_bool(a, atom_value) for a in F.args)


def eval_real(X: SemialgebraicSet, x: Sequence, tol: float = FLOAT_TOL) -> bool:
    if len(x) != X.ambient_dim:
        raise DimensionError(f"point has {len(x)} coordinates, set lives in R^{X.ambient_dim}")
    if _exact_point(x):
        pt = [Fraction(v) for v in x]

        def atom_value(a: Atom):
            v = a.poly.evaluate(pt, one=Fraction(1))
            return rel_holds((v > 0) - (v < 0), a.rel)
    else:
        pt = [float(v) for v in x]

        def atom_value(a: Atom):
            return rel_holds(float_sign(a.poly, pt, tol), a.rel)

    return _eval_bool(X.formula, atom_value)


def atom_verdict(a: Atom, x: PuiseuxPoint) -> Verdict3:
    g = a.poly.evaluate(list(x.coords))
    try:
        s = g.sign()
    except Indeterminate as exc:
        return unknown(f"{a.poly} {a.rel} 0: {exc}")
    return TRUE if rel_holds(s, a.rel) else FALSE


def _eval3(F, x) -> Verdict3:
    if isinstance(F, Atom):
        return atom_verdict(F, x)
    if isinstance(F, Not):
        return ~_eval3(F.arg, x)
    if isinstance(F, And):
        out = TRUE
        for a in F.args:
            out = out & _eval3(a, x)
            if out.is_false:
                return out
        return out
    out = FALSE
    for a in F.args:
        out = out | _eval3(a, x)
        if out.is_true:
            return out
    return out


def eval_puiseux(X: SemialgebraicSet, x: PuiseuxPoint) -> Verdict3:
    if len(x) != X.ambient_dim:
        raise DimensionError(f"point has {len(x)} coordinates, set lives in R^{X.ambient_dim}")
    return _eval3(X.formula, x)


# -- normal forms -----------------------------------------------------------------

def nnf(F, negate: bool = False):
    """Negation normal form: ``Not`` pushed into the atoms by flipping relations."""
    if isinstance(F, Atom):
        return F.negate() if negate else F
    if isinstance(F, Not):
        return nnf(F.arg, not negate)
    kids = [nnf(a, negate) for a in F.args]
    if isinstance(F, And):
        return disj(*kids) if negate else conj(*kids)
    return conj(*kids) if negate else disj(*kids)


def _dnf(F) -> list[tuple]:
    if isinstance(F, Atom):
        return [(F,)]
    if isinstance(F, Or):
        out = []
        for a in F.args:
            out.extend(_dnf(a))
        return out
    acc = [()]
    for a in F.args:
        acc = [c + d for c in acc for d in _dnf(a)]
    return acc


def dnf(F) -> list[tuple]:
    """Disjunctive normal form as a list of atom tuples.

    The construction is compositional: the conjuncts of ``A || B`` are those
    of ``A`` followed by those of ``B``.
    """
    out = []
    for c in _dnf(nnf(F)):
        out.append(tuple(dict.fromkeys(c)))
    return out


def split_weak(conjunct: tuple, limit: int = 4) -> list[tuple]:
    """Split ``g <= 0`` into ``g < 0`` or ``g = 0`` so boundaries get sampled."""
    weak = [a for a in conjunct if a.rel in ("<=", ">=")]
    if not weak or len(weak) > limit:
        return [conjunct]
    out = [()]
    for a in conjunct:
        if a.rel in ("<=", ">="):
            strict = Atom(a.poly, a.rel[0])
            out = [c + (strict,) for c in out] + [c + (Atom(a.poly, "="),) for c in out]
        else:
            out = [c + (a,) for c in out]
    return out


class Conjunct:
    """A conjunction of atoms compiled for batch float evaluation."""

    def __init__(self, atoms: Sequence[Atom], n: int):
        self.atoms = tuple(atoms)
        self.n = n
        self.key = " && ".join(sorted(a.to_str(default_names(n) if n <= 3 else None) for a in self.atoms))
        self.eqs = [a.poly for a in self.atoms if a.rel == "=" and not a.poly.is_zero()]
        self.ineqs = [a for a in self.atoms if a.rel != "=" and not a.poly.is_constant()]
        self.empty = any(
            a.poly.is_constant() and not rel_holds(_sign(a.poly.constant_term()), a.rel)
            for a in self.atoms
        )
        self.eq_pack = _pack(self.eqs, n)
        self.ineq_pack = _pack([a.poly for a in self.ineqs], n)
        ex, co, ow, k = self.eq_pack
        self.eq_abs_pack = (ex, np.abs(co), ow, k)

    def digest(self, *extra) -> int:
        h = hashlib.sha256(repr((self.key,) + extra).encode()).digest()
        return int.from_bytes(h[:8], "little")

    def contains(self, pts: np.ndarray, tol: float = FLOAT_TOL) -> np.ndarray:
        m = pts.shape[0]
        ok = np.ones(m, dtype=bool)
        if self.empty:
            return ~ok
        if self.eqs:
            v, mag = kernels.eval_packed(*self.eq_pack, pts)
            ok &= np.all(np.abs(v) <= tol * mag, axis=1)
        if self.ineqs:
            v, mag = kernels.eval_packed(*self.ineq_pack, pts)
            thr = tol * mag
            for j, a in enumerate(self.ineqs):
                col, t = v[:, j], thr[:, j]
                if a.rel == ">":
                    ok &= col > t
                elif a.rel == ">=":
                    ok &= col >= -t
                elif a.rel == "<":
                    ok &= col < -t
                elif a.rel == "<=":
                    ok &= col <= t
                else:
                    ok &= np.abs(col) > t
        return ok

    def project(self, pts: np.ndarray, caps: np.ndarray, iters: int = 40) -> np.ndarray:
        if not self.eqs:
            return pts
        return kernels.newton_packed(*self.eq_pack, pts, caps, iters, 1e-13)

    def jacobian(self, x: np.ndarray) -> np.ndarray:
        if not self.eqs:
            return np.zeros((0, self.n))
        _, jac = kernels.eval_grad_packed(*self.eq_pack, x[None, :])
        return jac[0]

    def jacobian_scale(self, x: np.ndarray) -> np.ndarray:
        """Row norms of the Jacobian with all terms made positive."""
        if not self.eqs:
            return np.zeros(0)
        _, jac = kernels.eval_grad_packed(*self.eq_abs_pack, np.abs(x)[None, :])
        return np.linalg.norm(jac[0], axis=1)


def _sign(c) -> int:
    return (c > 0) - (c < 0)


def _pack(polys: Sequence[Polynomial], n: int):
    exps, coeffs, owner = [], [], []
    for i, f in enumerate(polys):
        for e, c in f.terms:
            exps.append(e)
            coeffs.append(float(c))
            owner.append(i)
    return (
        np.array(exps, dtype=np.int64).reshape(-1, n),
        np.array(coeffs, dtype=np.float64),
        np.array(owner, dtype=np.int64),
        len(polys),
    )


def conjuncts_of(X: SemialgebraicSet, split: bool = True) -> list[Conjunct]:
    out = []
    for c in dnf(X.formula):
        for piece in split_weak(c) if split else [c]:
            out.append(Conjunct(piece, X.ambient_dim))
    return out


# -- sampling ---------------------------------------------------------------------

@dataclass
class SampleResult:
    points: list = field(default_factory=list)
    starved: bool = False
    tried: int = 0


def _unit_rows(rng, m, n):
    g = rng.standard_normal((m, n))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def sample_conjunct(
    C: Conjunct,
    radius: float,
    count: int,
    rng: np.random.Generator,
    max_tries: int | None = None,
    inner: float | None = None,
) -> tuple[np.ndarray, int]:
    """Points of ``C`` (already translated so the base point is 0) with norm < radius."""
    n = C.n
    if C.empty:
        return np.zeros((0, n)), 0
    max_tries = max_tries or 40 * count
    inner = inner if inner is not None else radius * 1e-3
    found = []
    tried = 0
    batch = max(64, min(4096, 4 * count))
    while tried < max_tries and sum(len(f) for f in found) < count:
        m = min(batch, max_tries - tried)
        u = rng.random(m)
        r = np.exp(np.log(inner) + u * (np.log(radius) - np.log(inner)))
        pts = _unit_rows(rng, m, n) * r[:, None]
        pts = C.project(pts, 0.5 * r)
        norms = np.linalg.norm(pts, axis=1)
        ok = (norms < radius) & C.contains(pts)
        found.append(pts[ok])
        tried += m
    pts = np.concatenate(found) if found else np.zeros((0, n))
    return pts[:count], tried


def sample_near(
    X: SemialgebraicSet,
    p: Sequence,
    radius: float,
    count: int,
    seed: int = 0,
    max_tries: int | None = None,
) -> SampleResult:
    """Deterministic sample of points of ``X`` within ``radius`` of ``p``.

    Candidates are drawn in the ball, projected onto the equalities of each
    disjunct by damped Newton steps, and re-verified.  ``starved`` is set when
    fewer than ``count`` points were found.
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    n = X.ambient_dim
    if len(p) != n:
        raise DimensionError("base point dimension mismatch")
    pf = np.array([float(v) for v in p])
    Y = X.translate([Fraction(v) for v in p]) if _exact_point(p) else None
    conj = conjuncts_of(Y if Y is not None else X)
    live = [c for c in conj if not c.empty]
    res = SampleResult()
    if not live:
        res.starved = True
        return res
    per = max(1, math.ceil(count / len(live)))
    chunks = []
    for C in live:
        rng = np.random.default_rng([seed, C.digest("sample") % (2**32)])
        if Y is None:
            raise ValueError("sample_near needs a rational base point")
        pts, tried = sample_conjunct(C, radius, per, rng, max_tries)
        res.tried += tried
        chunks.append(pts)
    pts = np.concatenate(chunks)[:count]
    res.points = [tuple(float(v) for v in (pf + q)) for q in pts]
    res.starved = len(res.points) < count
    return res


# -- dimension and tangent spaces ------------------------------------------------------

@dataclass
class DimEstimate:
    dim: int | None
    confidence: str  # high | low | empty | unknown
    samples: int = 0

    def to_json(self):
        return {"dim": self.dim, "confidence": self.confidence, "samples": self.samples}


def _normalized_rank(J: np.ndarray, tol: float = 1e-6) -> int:
    if J.size == 0:
        return 0
    norms = np.linalg.norm(J, axis=1)
    rows = J[norms > 0] / norms[norms > 0][:, None]
    if rows.size == 0:
        return 0
    s = np.linalg.svd(rows, compute_uv=False)
    return int(np.sum(s > tol * s[0]))


def local_dimension_estimate(
    X: SemialgebraicSet, p: Sequence, seed: int = 0, radius: float = 1e-2, count: int = 48
) -> DimEstimate:
    """Dimension of ``X`` near ``p``: ``n - rank`` of the active Jacobian, maximised over samples."""
    n = X.ambient_dim
    Y = X.translate([Fraction(v) for v in p])
    conj = [c for c in conjuncts_of(Y) if not c.empty]
    if not conj:
        return DimEstimate(-1, "empty", 0)
    best = None
    total = 0
    low = False
    for C in conj:
        rng = np.random.default_rng([seed, C.digest("dim") % (2**32)])
        pts, _ = sample_conjunct(C, radius, count, rng)
        if len(pts) == 0:
            continue
        total += len(pts)
        if not C.eqs:
            d = n
        else:
            ranks = []
            for x in pts:
                J = C.jacobian(x)
                ranks.append(_normalized_rank(J))
            full = max(ranks)
            d = n - full if full > 0 else None
            if d is None:
                d = _pca_dim(pts)
                low = True
        best = d if best is None else max(best, d)
    if best is None:
        return DimEstimate(None, "unknown", 0)
    return DimEstimate(best, "low" if low else "high", total)


def _pca_dim(pts: np.ndarray) -> int:
    if len(pts) < 2:
        return 0
    c = pts - pts.mean(axis=0)
    s = np.linalg.svd(c, compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.sum(s > 1e-3 * s[0]))


class SingularSample(ValueError):
    pass


def tangent_space(X: SemialgebraicSet, x: Sequence[float], tol: float = 1e-7) -> np.ndarray:
    """Orthonormal basis (rows) of the tangent space of ``X`` at a smooth point ``x``."""
    n = X.ambient_dim
    xf = np.array([float(v) for v in x])
    conj = [c for c in conjuncts_of(X) if not c.empty and c.contains(xf[None, :], 1e-7)[0]]
    if not conj:
        raise SingularSample(f"point {tuple(xf)} is not in the set")
    C = max(conj, key=lambda c: len(c.eqs))
    if not C.eqs:
        return np.eye(n)
    J = C.jacobian(xf)
    norms = np.linalg.norm(J, axis=1)
    if np.any(norms <= 1e-9 * C.jacobian_scale(xf)) or np.any(norms == 0):
        raise SingularSample("singular sample: vanishing gradient")
    rows = J / norms[:, None]
    _, s, vt = np.linalg.svd(rows)
    if np.sum(s > tol) < rows.shape[0]:
        raise SingularSample("singular sample: dependent equations")
    r = rows.shape[0]
    return vt[r:]
