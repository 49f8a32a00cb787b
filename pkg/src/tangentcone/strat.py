"""Stratifications, their induced cone strata, and checks on both.

A stratification is a list ``S_0, ..., S_n`` of semialgebraic sets where
``S_i`` is meant to have dimension at most ``i``.  At a point ``p`` it
induces a partition of direction space: ``C_{p,0}`` is the cone of ``S_0``
and ``C_{p,i+1}`` is the cone of ``S_0 u ... u S_{i+1}`` minus the cone of
``S_0 u ... u S_i``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .cone import (
    DEFAULT_BUDGET,
    DEFAULT_SCHEDULE,
    INDETERMINATE,
    UNSUPPORTED,
    ConeQuery,
    ConeVerdict,
    RaySet,
    combine_verdicts,
    cone_membership_numeric,
    cone_membership_puiseux,
    cone_scan,
    exact_cone,
    sphere_grid,
)
from .poly import DimensionError, Polynomial
from .puiseux import PuiseuxPoint, PuiseuxSeries, risometry_check
from .semialg import (
    Atom,
    SemialgebraicSet,
    SingularSample,
    conjuncts_of,
    disj,
    eval_real,
    local_dimension_estimate,
    sample_conjunct,
    tangent_space,
)

__all__ = [
    "Stratification",
    "InducedConeStrata",
    "induced_cone_strata",
    "dimension_condition_check",
    "DimensionReport",
    "WhitneyReport",
    "whitney_check",
    "structural_check",
    "LiftReport",
    "cone_risometry_lift",
    "EqualConesReport",
    "risometry_implies_equal_cones_check",
    "WHITNEY_DIAGNOSTIC",
]

WHITNEY_DIAGNOSTIC = "it is impossible for (C_{0,i})_i to be a Whitney stratification"


def _empty_set(names) -> SemialgebraicSet:
    return SemialgebraicSet(Atom(Polynomial.const(len(names), 1), "="), tuple(names))


def _is_empty(X: SemialgebraicSet) -> bool:
    return all(C.empty for C in conjuncts_of(X, split=False))


@dataclass
class Stratification:
    strata: list
    declared_dims: list | None = None

    def __post_init__(self):
        if not self.strata:
            raise ValueError("a stratification needs at least one stratum")
        names = self.strata[0].names
        for S in self.strata:
            if S.names != names:
                raise DimensionError("strata live in different spaces")
        if self.declared_dims is None:
            self.declared_dims = list(range(len(self.strata)))

    @property
    def ambient_dim(self) -> int:
        return self.strata[0].ambient_dim

    @property
    def names(self) -> tuple:
        return self.strata[0].names

    def __len__(self):
        return len(self.strata)

    def is_empty(self, i: int) -> bool:
        return _is_empty(self.strata[i])

    def prefix(self, d: int) -> SemialgebraicSet:
        """``S_0 u ... u S_d``."""
        live = [S.formula for S in self.strata[: d + 1] if not _is_empty(S)]
        if not live:
            return _empty_set(self.names)
        return SemialgebraicSet(disj(*live), self.names)

    def check_partition(self, seed: int = 0, count: int = 200, box: float = 1.0) -> dict:
        """Sampled disjointness and cover: uniform points plus points of each stratum."""
        rng = np.random.default_rng(seed)
        n = self.ambient_dim
        pts = [tuple(v) for v in rng.uniform(-box, box, size=(count, n))]
        for i, S in enumerate(self.strata):
            for C in conjuncts_of(S):
                got, _ = sample_conjunct(C, box, max(count // 10, 4), rng)
                pts += [tuple(v) for v in got]
        overlaps, uncovered = [], []
        for x in pts:
            owners = [i for i, S in enumerate(self.strata) if eval_real(S, x)]
            if len(owners) > 1:
                overlaps.append({"point": [float(v) for v in x], "strata": owners})
            elif not owners:
                uncovered.append([float(v) for v in x])
        return {
            "points": len(pts),
            "overlaps": overlaps[:10],
            "uncovered": uncovered[:10],
            "ok": not overlaps and not uncovered,
        }

    def to_json(self) -> dict:
        return {
            "strata": [S.formula_str() for S in self.strata],
            "declared_dims": list(self.declared_dims),
            "names": list(self.names),
        }


# -- induced cone strata ----------------------------------------------------------------

def _aggregate(verdicts: list) -> ConeVerdict:
    """The verdict for a union from the verdicts of its pieces."""
    for v in verdicts:
        if v.supported:
            return v
    if not verdicts:
        return ConeVerdict(UNSUPPORTED, "combined", True, None, "empty union")
    if any(v.status == INDETERMINATE for v in verdicts):
        return ConeVerdict(INDETERMINATE, "combined", False, None, "some piece is indeterminate")
    certified = all(v.certified for v in verdicts)
    return ConeVerdict(UNSUPPORTED, "combined", certified, None, "no piece supports the direction")


class InducedConeStrata:
    """Membership oracles for ``C_{p,0}, ..., C_{p,n}`` built on cone verdicts."""

    def __init__(
        self,
        S: Stratification,
        p: Sequence = (),
        engines: Sequence[str] = ("puiseux", "numeric"),
        schedule: Sequence[float] = DEFAULT_SCHEDULE,
        budget: int = DEFAULT_BUDGET,
        seed: int = 0,
    ):
        self.S = S
        n = S.ambient_dim
        self.p = tuple(Fraction(v) for v in p) if len(p) else (Fraction(0),) * n
        self.engines = tuple(engines)
        self.schedule = tuple(schedule)
        self.budget = budget
        self.seed = seed
        self.consulted: set[int] = set()
        self._cache: dict = {}
        self._exact = None

    @property
    def top(self) -> int:
        return len(self.S) - 1

    def stratum_verdict(self, j: int, y: Sequence) -> ConeVerdict:
        """Cone verdict for the single stratum ``S_j``; engines run lazily."""
        q = ConeQuery(self.S.strata[j], self.p, y)
        key = (j, q.y)
        if key in self._cache:
            return self._cache[key]
        self.consulted.add(j)
        if self.S.is_empty(j):
            v = ConeVerdict(UNSUPPORTED, "combined", True, None, "empty stratum")
        else:
            verdicts = {}
            for name in self.engines:
                if name == "puiseux":
                    verdicts[name] = cone_membership_puiseux(q)
                elif name == "numeric":
                    verdicts[name] = cone_membership_numeric(q, self.schedule, self.budget, self.seed)
                else:
                    raise ValueError(f"engine {name!r} is not available for induced strata")
                if verdicts[name].determinate:
                    break
            v = combine_verdicts(verdicts)
        self._cache[key] = v
        return v

    def prefix_verdict(self, d: int, y: Sequence) -> ConeVerdict:
        """Verdict for the cone of ``S_0 u ... u S_d`` (the cone of a union is the union)."""
        return _aggregate([self.stratum_verdict(j, y) for j in range(d + 1)])

    def index(self, y: Sequence) -> tuple[int | None, str]:
        """The unique ``i`` with ``y`` in ``C_{p,i}``, or None with a reason."""
        for d in range(len(self.S)):
            v = self.prefix_verdict(d, y)
            if v.supported:
                return d, ""
            if v.status == INDETERMINATE:
                return None, f"cone of S_<={d} is indeterminate: {v.reason}"
        return None, "no prefix supports the direction (the strata do not cover a neighbourhood)"

    def member(self, i: int, y: Sequence) -> str:
        """``member``, ``not member`` or ``indeterminate`` for ``y`` in ``C_{p,i}``."""
        here = self.prefix_verdict(i, y)
        if here.status == INDETERMINATE:
            return INDETERMINATE
        if not here.supported:
            return "not member"
        if i == 0:
            return "member"
        before = self.prefix_verdict(i - 1, y)
        if before.status == INDETERMINATE:
            return INDETERMINATE
        return "not member" if before.supported else "member"

    # exact descriptions
    def exact(self) -> list | None:
        """RaySet per index when every stratum below the top has an exact cone.

        The prefix of all strata covers a neighbourhood of ``p`` (the strata
        partition the space), so its cone is everything.
        """
        if self._exact is not None:
            return self._exact or None
        n = self.S.ambient_dim
        prefixes = []
        acc = RaySet.empty(n)
        for j in range(self.top):
            if self.S.is_empty(j):
                R = RaySet.empty(n)
            else:
                R = exact_cone(self.S.strata[j], self.p)
                if R is None:
                    self._exact = []
                    return None
            acc = acc.union(R)
            prefixes.append(acc)
        prefixes.append(RaySet.everything(n))
        out = [prefixes[0]]
        for d in range(1, len(prefixes)):
            out.append(prefixes[d].difference(prefixes[d - 1]))
        self._exact = out
        return out

    def exact_sets(self) -> list | None:
        ex = self.exact()
        if ex is None:
            return None
        return [R.to_set(self.S.names) for R in ex]

    def as_stratification(self) -> Stratification | None:
        """The induced strata as a stratification of direction space (inherited indices)."""
        sets = self.exact_sets()
        if sets is None or any(s is None for s in sets):
            return None
        return Stratification(sets)

    def estimated_dims(self, seed: int = 0) -> list:
        """Sampled local dimension of each exact induced stratum at a representative point."""
        ex = self.exact()
        sets = self.exact_sets()
        if ex is None or sets is None:
            return []
        out = []
        for R, Z in zip(ex, sets):
            if R.is_empty or Z is None:
                out.append(None)
                continue
            rep = _representative(R)
            est = local_dimension_estimate(Z, rep, seed=seed, radius=1e-2)
            out.append(est.dim)
        return out

    def structural_diagnostics(self, seed: int = 0) -> list:
        """Nonempty strata of index ``d`` whose dimension is below ``d``."""
        ex = self.exact()
        if ex is None:
            return []
        dims = self.estimated_dims(seed)
        out = []
        for d, (R, est) in enumerate(zip(ex, dims)):
            if R.is_empty:
                continue
            exact_dim = R.dimension()
            if exact_dim < d:
                out.append(
                    {
                        "index": d,
                        "exact_dim": exact_dim,
                        "estimated_dim": est,
                        "message": WHITNEY_DIAGNOSTIC,
                    }
                )
        return out

    def scan(self, resolution: int = 16, directions: Sequence | None = None) -> dict:
        n = self.S.ambient_dim
        dirs = list(directions) if directions is not None else sphere_grid(n, resolution)
        ex = self.exact()
        rows, mismatches, undetermined = [], [], 0
        for y in dirs:
            idx, why = self.index(y)
            row = {"direction": [str(c) for c in y], "index": idx}
            if idx is None:
                undetermined += 1
                row["reason"] = why
            if ex is not None and idx is not None:
                truth = [i for i, R in enumerate(ex) if R.contains(y)]
                row["exact_index"] = truth
                if truth != [idx]:
                    mismatches.append(row)
            rows.append(row)
        return {"rows": rows, "disagreements": mismatches, "indeterminate": undetermined}

    def to_json(self, resolution: int = 16) -> dict:
        sets = self.exact_sets()
        return {
            "p": [str(c) for c in self.p],
            "exact": None if sets is None else [None if s is None else s.formula_str() for s in sets],
            "exact_dims": None if self.exact() is None else [R.dimension() for R in self.exact()],
            "diagnostics": self.structural_diagnostics(),
            "scan": self.scan(resolution),
        }


def _representative(R: RaySet) -> tuple:
    n = R.n
    if R.complement:
        # a rational point off every listed ray
        cand = tuple(Fraction(1, k + 2) * (-1) ** k for k in range(n))
        return cand
    if R.rays:
        v = R.rays[0]
        if v.is_rational:
            return v.rational_vector()
    return (Fraction(0),) * n


def induced_cone_strata(S: Stratification, p: Sequence = (), **config) -> InducedConeStrata:
    return InducedConeStrata(S, p, **config)


# -- dimension bounds ------------------------------------------------------------------------

@dataclass
class DimensionReport:
    rows: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r["status"] == "ok" for r in self.rows)

    @property
    def violations(self) -> list:
        return [r["d"] for r in self.rows if r["status"] == "violation"]

    def to_json(self) -> dict:
        return {"rows": self.rows, "ok": self.ok}


def dimension_condition_check(
    S: Stratification, p: Sequence = (), seeds: Sequence[int] = (0, 1, 2), radius: float = 1.0, count: int = 48
) -> DimensionReport:
    """Estimate ``dim(S_0 u ... u S_d)`` near ``p`` and compare with the declared bound."""
    n = S.ambient_dim
    p = tuple(Fraction(v) for v in p) if len(p) else (Fraction(0),) * n
    rep = DimensionReport()
    for d in range(len(S)):
        bound = S.declared_dims[d]
        U = S.prefix(d)
        if _is_empty(U):
            rep.rows.append({"d": d, "bound": bound, "estimate": -1, "status": "ok"})
            continue
        ests = [local_dimension_estimate(U, p, seed=s, radius=radius, count=count) for s in seeds]
        known = [e.dim for e in ests if e.dim is not None]
        if not known:
            rep.rows.append({"d": d, "bound": bound, "estimate": None, "status": "unknown"})
            continue
        est = max(known)
        status = "ok" if est <= bound else "violation"
        rep.rows.append({"d": d, "bound": bound, "estimate": est, "status": status})
    return rep


# -- Whitney conditions -------------------------------------------------------------------------

@dataclass
class WhitneyReport:
    pair: tuple
    verdict: str  # no violation found | violation | vacuous | structural failure | indeterminate
    levels: dict = field(default_factory=dict)
    max_defect_finest: float = 0.0
    singular_skipped: int = 0
    witness: dict | None = None
    diagnostic: str = ""

    @property
    def ok(self) -> bool:
        return self.verdict in ("no violation found", "vacuous")

    def to_json(self) -> dict:
        return {
            "pair": list(self.pair),
            "verdict": self.verdict,
            "levels": {str(k): v for k, v in sorted(self.levels.items())},
            "max_defect_finest": self.max_defect_finest,
            "singular_skipped": self.singular_skipped,
            "witness": self.witness,
            "diagnostic": self.diagnostic,
        }


def structural_check(S: Stratification, seed: int = 0) -> list:
    """Nonempty strata whose estimated dimension is below their index."""
    out = []
    for d, X in enumerate(S.strata):
        if _is_empty(X):
            continue
        est = _stratum_dim(X, seed)
        if est is not None and est < d:
            out.append({"index": d, "estimated_dim": est, "message": WHITNEY_DIAGNOSTIC})
    return out


def _stratum_dim(X: SemialgebraicSet, seed: int, radius: float = 1.0):
    n = X.ambient_dim
    best = None
    for C in conjuncts_of(X):
        if C.empty:
            continue
        rng = np.random.default_rng([seed, C.digest("stratum-dim") % (2**32)])
        pts, _ = sample_conjunct(C, radius, 16, rng)
        for x in pts:
            if not C.eqs:
                d = n
            else:
                J = C.jacobian(x)
                s = np.linalg.svd(J, compute_uv=False) if J.size else np.zeros(0)
                d = n - int(np.sum(s > 1e-8 * max(s[0], 1e-300))) if s.size else n
            best = d if best is None else max(best, d)
    return best


def _angle_to_space(v: np.ndarray, basis: np.ndarray) -> float:
    v = v / np.linalg.norm(v)
    if basis.size == 0:
        return math.pi / 2
    resid = v - basis.T @ (basis @ v)
    return float(math.asin(min(1.0, float(np.linalg.norm(resid)))))


def _shell_points(C, y: np.ndarray, r: float, count: int, rng) -> np.ndarray:
    n = y.size
    found = []
    tries = 0
    while tries < 40 * count and sum(len(f) for f in found) < count:
        m = 4 * count
        g = rng.standard_normal((m, n))
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        rad = r * (0.5 + 0.5 * rng.random(m))
        pts = C.project(y[None, :] + g * rad[:, None], 0.5 * rad)
        dist = np.linalg.norm(pts - y[None, :], axis=1)
        ok = C.contains(pts) & (dist <= r) & (dist >= 0.25 * r)
        found.append(pts[ok])
        tries += m
    return np.concatenate(found)[:count] if found else np.zeros((0, n))


def _base_points(X: SemialgebraicSet, center: np.ndarray, count: int, rng, radius: float) -> list:
    out = []
    for C in conjuncts_of(X):
        if C.empty:
            continue
        if C.contains(center[None, :])[0]:
            out.append((C, center.copy()))
            continue
        pts = C.project(center[None, :] + _ball(rng, center.size, radius, radius * 0.1, count), np.full(count, radius))
        ok = C.contains(pts) & (np.linalg.norm(pts - center[None, :], axis=1) <= radius)
        out += [(C, x) for x in pts[ok]]
    return out[:count]


def _ball(rng, n, radius, inner, m):
    g = rng.standard_normal((m, n))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    r = np.exp(np.log(inner) + rng.random(m) * (np.log(radius) - np.log(inner)))
    return g * r[:, None]


def _seed_levels(S, i, j, center, seed, count, levels, r0, base_count, base_radius):
    """Per-level maximal defects for one seed; also the worst sample at each level."""
    rng = np.random.default_rng([seed, i, j])
    Si, Sj = S.strata[i], S.strata[j]
    bases = _base_points(Si, center, base_count, rng, base_radius)
    if not bases:
        return None, 0
    targets = [C for C in conjuncts_of(Sj) if not C.empty]
    singular = 0
    per_level = []
    for k in range(levels):
        r = r0 * 0.5**k
        worst = None
        seen = 0
        for Ci, y in bases:
            try:
                Ty = tangent_space(Si, y)
            except SingularSample:
                singular += 1
                continue
            for Cj in targets:
                xs = _shell_points(Cj, y, r, count, rng)
                for x in xs:
                    try:
                        Tx = tangent_space(Sj, x)
                    except SingularSample:
                        singular += 1
                        continue
                    seen += 1
                    da = max((_angle_to_space(v, Tx) for v in Ty), default=0.0)
                    yx = Ci.project(x[None, :], np.array([np.inf]))[0]
                    if not Ci.contains(yx[None, :])[0]:
                        yx = y
                    sec = x - yx
                    db = _angle_to_space(sec, Tx) if np.linalg.norm(sec) > 0 else 0.0
                    d = max(da, db)
                    if worst is None or d > worst["defect"]:
                        worst = {
                            "defect": d,
                            "defect_a": da,
                            "defect_b": db,
                            "x": [float(v) for v in x],
                            "y": [float(v) for v in yx],
                        }
        per_level.append({"radius": r, "samples": seen, "worst": worst})
    return per_level, singular


def whitney_check(
    S: Stratification,
    i: int,
    j: int,
    p: Sequence = (),
    seeds: Sequence[int] = (0, 1, 2),
    count: int = 16,
    levels: int = 12,
    r0: float = 1e-3,
    tol: float = 1e-3,
    base_count: int = 3,
    base_radius: float = 0.5,
    index_convention: bool = True,
) -> WhitneyReport:
    """Sampled Whitney (a) and (b) defects for strata ``S_i`` (small) and ``S_j`` (big).

    Shells around base points of ``S_i`` shrink geometrically by 1/2.  A
    violation is reported when the defect stays above ``tol`` on the three
    finest shells without decaying (finest at least half the coarsest), for
    some seed; a pass needs every seed to pass.
    """
    if not i < j:
        raise ValueError("whitney_check needs i < j")
    pair = (i, j)
    if index_convention:
        diag = [d for d in structural_check(S) if d["index"] in pair]
        if diag:
            return WhitneyReport(pair, "structural failure", diagnostic=WHITNEY_DIAGNOSTIC, witness={"strata": diag})
    if S.is_empty(i) or S.is_empty(j):
        return WhitneyReport(pair, "vacuous", diagnostic="an empty stratum")
    n = S.ambient_dim
    center = np.array([float(v) for v in p]) if len(p) else np.zeros(n)
    rep = WhitneyReport(pair, "no violation found")
    any_data = False
    finest = 0.0
    for seed in seeds:
        per_level, singular = _seed_levels(S, i, j, center, seed, count, levels, r0, base_count, base_radius)
        rep.singular_skipped += singular
        if per_level is None:
            rep.levels[seed] = []
            continue
        rep.levels[seed] = [
            {"radius": L["radius"], "samples": L["samples"], "defect": None if L["worst"] is None else L["worst"]["defect"]}
            for L in per_level
        ]
        tail = per_level[-3:]
        if all(L["worst"] is not None for L in tail):
            any_data = True
            defects = [L["worst"]["defect"] for L in per_level if L["worst"] is not None]
            finest = max(finest, tail[-1]["worst"]["defect"])
            if all(L["worst"]["defect"] > tol for L in tail) and defects[-1] >= 0.5 * defects[0]:
                rep.verdict = "violation"
                rep.witness = dict(tail[-1]["worst"], seed=seed)
    rep.max_defect_finest = finest
    if not any_data and rep.verdict != "violation":
        rep.verdict = "vacuous"
        rep.diagnostic = f"S_{j} was not found near S_{i} at the finest shells"
    return rep


# -- risometry lifts ----------------------------------------------------------------------------

@dataclass
class LiftReport:
    psi: tuple | None
    names: tuple
    candidate: bool = True
    reason: str = ""
    psi_risometry: dict | None = None
    phi_risometry: dict | None = None
    mapped: list = field(default_factory=list)
    onto: list = field(default_factory=list)
    cone_ok: bool = True

    @property
    def is_identity(self) -> bool:
        if self.psi is None:
            return False
        n = len(self.psi)
        return all(f == Polynomial.var(n, i) for i, f in enumerate(self.psi))

    @property
    def ok(self) -> bool:
        return (
            self.candidate
            and self.cone_ok
            and (self.psi_risometry or {}).get("failed", 1) == 0
            and (self.psi_risometry or {}).get("indeterminate", 1) == 0
        )

    def to_json(self) -> dict:
        return {
            "candidate": self.candidate,
            "reason": self.reason,
            "psi": None if self.psi is None else [f.to_str(self.names) for f in self.psi],
            "identity": self.is_identity,
            "psi_risometry": self.psi_risometry,
            "phi_risometry": self.phi_risometry,
            "mapped": self.mapped,
            "onto": self.onto,
            "cone_ok": self.cone_ok,
            "ok": self.ok,
        }


def _lift(phi: Sequence[Polynomial]) -> tuple[tuple | None, str]:
    parts = []
    for f in phi:
        if f.constant_term() != 0:
            return None, "not a lift candidate: phi(t*x)/t has a t^-1 term"
        parts.append(f.homogeneous_part(1))
    return tuple(parts), ""


def _sample_pairs(n: int, total: int, scales: Sequence[int], seed: int) -> list:
    rng = np.random.default_rng(seed)
    pairs = []
    per = max(1, total // len(scales))

    def rand_q():
        return Fraction(int(rng.integers(-6, 7)), int(rng.integers(1, 5)))

    for k in scales:
        for _ in range(per):
            a = []
            b = []
            for _ in range(n):
                lead = rand_q()
                mid = rand_q()
                a.append(PuiseuxSeries([(k, lead), (k + Fraction(1, 2), mid), (k + 1, rand_q())]))
                mode = int(rng.integers(0, 3))
                if mode == 0:
                    b.append(PuiseuxSeries([(k, rand_q()), (k + 1, rand_q())]))
                elif mode == 1:
                    b.append(PuiseuxSeries([(k, lead), (k + 1, rand_q())]))
                else:
                    b.append(PuiseuxSeries([(k, lead), (k + Fraction(1, 2), mid), (k + 2, rand_q())]))
            pairs.append((PuiseuxPoint(a), PuiseuxPoint(b)))
    return pairs


def _eval_linear(psi, y) -> tuple:
    return tuple(f.evaluate([Fraction(c) for c in y], one=Fraction(1)) for f in psi)


def _matrix(psi) -> list:
    n = len(psi)
    return [[f.coeff(tuple(1 if k == j else 0 for k in range(n))) for j in range(n)] for f in psi]


def _solve(M: list, b: Sequence) -> tuple | None:
    n = len(M)
    A = [list(row) + [Fraction(v)] for row, v in zip(M, b)]
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] != 0), None)
        if piv is None:
            return None
        A[c], A[piv] = A[piv], A[c]
        for r in range(n):
            if r != c and A[r][c] != 0:
                f = A[r][c] / A[c][c]
                A[r] = [a - f * bb for a, bb in zip(A[r], A[c])]
    return tuple(A[r][n] / A[r][r] for r in range(n))


def _supported(X: SemialgebraicSet, p, y, schedule, budget, seed) -> ConeVerdict:
    q = ConeQuery(X, p, y)
    v = cone_membership_puiseux(q)
    if v.determinate:
        return v
    return cone_membership_numeric(q, schedule, budget, seed)


def cone_risometry_lift(
    phi,
    X: SemialgebraicSet,
    Y: SemialgebraicSet,
    directions: Sequence | None = None,
    resolution: int = 16,
    pairs: int = 1000,
    scales: Sequence[int] = (1, 2, 3, 4),
    seed: int = 0,
    schedule: Sequence[float] = DEFAULT_SCHEDULE,
    budget: int = DEFAULT_BUDGET,
) -> LiftReport:
    """Build ``psi(x) = lim phi(t*x)/t`` for a polynomial map fixing 0 and check it.

    ``psi`` is the linear part of ``phi``.  The report checks that ``psi``
    preserves rv of differences on sampled pairs and that it maps supported
    cone directions of ``X`` to supported directions of ``Y`` (and, when
    invertible, that every supported direction of ``Y`` is hit).
    """
    if callable(phi):
        raise TypeError("only polynomial maps can be lifted; black-box maps are rejected")
    phi = tuple(phi)
    n = X.ambient_dim
    if len(phi) != n or any(f.nvars != n for f in phi):
        raise DimensionError("phi must map R^n to R^n")
    psi, why = _lift(phi)
    rep = LiftReport(psi, X.names)
    if psi is None:
        rep.candidate = False
        rep.reason = why
        return rep
    sample = _sample_pairs(n, pairs, scales, seed)
    rep.psi_risometry = risometry_check(psi, sample).to_json()
    rep.phi_risometry = risometry_check(phi, sample).to_json()
    origin = (Fraction(0),) * n
    dirs = list(directions) if directions is not None else sphere_grid(n, resolution)
    x_dirs = [y for y in dirs if _supported(X, origin, y, schedule, budget, seed).supported]
    for y in x_dirs:
        z = _eval_linear(psi, y)
        if not any(z):
            rep.mapped.append({"direction": [str(c) for c in y], "image": None, "supported": False})
            rep.cone_ok = False
            continue
        ok = _supported(Y, origin, z, schedule, budget, seed).supported
        rep.mapped.append({"direction": [str(c) for c in y], "image": [str(c) for c in z], "supported": ok})
        rep.cone_ok &= ok
    M = _matrix(psi)
    for z in dirs:
        if not _supported(Y, origin, z, schedule, budget, seed).supported:
            continue
        pre = _solve(M, z)
        if pre is None:
            rep.onto.append({"direction": [str(c) for c in z], "preimage": None, "supported": None})
            continue
        ok = _supported(X, origin, pre, schedule, budget, seed).supported
        rep.onto.append({"direction": [str(c) for c in z], "preimage": [str(c) for c in pre], "supported": ok})
        rep.cone_ok &= ok
    return rep


@dataclass
class EqualConesReport:
    agree: int = 0
    differ: list = field(default_factory=list)
    excluded: int = 0
    phi_risometry: dict | None = None
    conclusion: str = ""

    @property
    def cones_equal(self) -> bool:
        return not self.differ

    def to_json(self) -> dict:
        return {
            "agree": self.agree,
            "differ": self.differ,
            "excluded": self.excluded,
            "phi_risometry": self.phi_risometry,
            "cones_equal": self.cones_equal,
            "conclusion": self.conclusion,
        }


def risometry_implies_equal_cones_check(
    phi,
    X: SemialgebraicSet,
    Y: SemialgebraicSet,
    p: Sequence = (),
    resolution: int = 16,
    seed: int = 0,
    engines: Sequence[str] = ("puiseux", "numeric"),
    schedule: Sequence[float] = DEFAULT_SCHEDULE,
    budget: int = DEFAULT_BUDGET,
) -> EqualConesReport:
    """Compare the scanned cones of ``X`` and ``Y`` at ``p``.

    Sets related by a risometry around ``p`` have equal cones there, so a
    direction certified in one cone and certified out of the other rules
    such a risometry out.
    """
    sx = cone_scan(X, p, resolution, engines, schedule, budget, seed)
    sy = cone_scan(Y, p, resolution, engines, schedule, budget, seed)
    rep = EqualConesReport()
    if phi is not None and not callable(phi):
        n = X.ambient_dim
        rep.phi_risometry = risometry_check(tuple(phi), _sample_pairs(n, 200, (1, 2, 3, 4), seed)).to_json()
    for ex, ey in zip(sx.entries, sy.entries):
        vx, vy = ex.combined, ey.combined
        if not (vx.determinate and vy.determinate):
            rep.excluded += 1
            continue
        if vx.supported == vy.supported:
            rep.agree += 1
        else:
            rep.differ.append(
                {
                    "direction": [str(c) for c in ex.direction],
                    "X": vx.to_json(),
                    "Y": vy.to_json(),
                }
            )
    if rep.differ:
        rep.conclusion = (
            "the cones differ at p, so no risometry of a ball around p carries X onto Y"
        )
    else:
        rep.conclusion = "the scanned cones agree on every determinate direction"
    return rep
