"""Numeric witness search for cone membership.

For each ``eps`` of a decreasing schedule the engine looks for a point
``x`` of the set with ``|x - p| < eps`` and a scale ``a > 0`` such that
``|a (x - p) - y| < eps``.  The optimal scale is ``a = <u, y> / |u|^2`` for
``u = x - p``, so the test reduces to ``<u, y> > 0`` and
``|y| sin(angle(u, y)) < eps``.

The search runs per disjunct of the set and a direction is supported when
one disjunct has witnesses at every ``eps``.  Results are cached per
disjunct, which makes the verdict for ``X or Y`` exactly the disjunction
of the verdicts for ``X`` and ``Y``.
"""
from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from ..semialg import Conjunct, conjuncts_of
from .types import INDETERMINATE, SUPPORTED, UNSUPPORTED, ConeQuery, ConeVerdict

__all__ = ["DEFAULT_SCHEDULE", "DEFAULT_BUDGET", "cone_membership_numeric", "clear_cache"]

DEFAULT_SCHEDULE = tuple(10.0**-k for k in range(1, 7))
DEFAULT_BUDGET = 10_000

_CACHE: dict = {}
_EXPONENTS = (1.5, 2.0, 3.0)
_COEFFS = (0.5, -0.5, 1.0, -1.0, 2.0, -2.0, 4.0, -4.0)


def clear_cache():
    _CACHE.clear()


def _perp_basis(u: np.ndarray) -> np.ndarray:
    n = u.size
    q, _ = np.linalg.qr(np.column_stack([u, np.eye(n)]))
    return q[:, 1:n].T


def _witness_mask(pts: np.ndarray, y: np.ndarray, eps: float):
    norms = np.linalg.norm(pts, axis=1)
    dots = pts @ y
    ny = np.linalg.norm(y)
    with np.errstate(divide="ignore", invalid="ignore"):
        a = np.where(norms > 0, dots / norms**2, 0.0)
        resid = np.linalg.norm(a[:, None] * pts - y[None, :], axis=1)
    if ny == 0:
        return norms < eps, a, np.zeros_like(norms)
    return (norms < eps) & (norms > 0) & (dots > 0) & (resid < eps), a, resid


def _targeted(y_unit: np.ndarray, eps: float, nrad: int = 24) -> np.ndarray:
    n = y_unit.size
    rmin = max(eps**5, 1e-150)
    radii = np.exp(np.linspace(math.log(eps * 0.9), math.log(rmin), nrad))
    basis = _perp_basis(y_unit) if n > 1 else np.zeros((0, n))
    rows = []
    for r in radii:
        base = r * y_unit
        rows.append(base)
        for e in _EXPONENTS:
            for c in _COEFFS:
                for b in basis:
                    rows.append(base + c * r**e * b)
    return np.array(rows)


def _random(rng, y_unit: np.ndarray, eps: float, m: int) -> np.ndarray:
    n = y_unit.size
    rmin = max(eps**5, 1e-150)
    u = rng.random(m)
    r = np.exp(math.log(rmin) + u * (math.log(eps) - math.log(rmin)))
    spread = np.exp(np.log(1e-3 * eps) + rng.random(m) * (0 - np.log(1e-3 * eps)))
    g = rng.standard_normal((m, n))
    d = y_unit[None, :] + spread[:, None] * g
    d /= np.linalg.norm(d, axis=1, keepdims=True)
    return d * r[:, None]


def _ball(rng, n: int, eps: float, m: int) -> np.ndarray:
    rmin = max(eps**5, 1e-150)
    u = rng.random(m)
    r = np.exp(math.log(rmin) + u * (math.log(eps) - math.log(rmin)))
    g = rng.standard_normal((m, n))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return g * r[:, None]


def _search_eps(C: Conjunct, y: np.ndarray, eps: float, budget: int, rng):
    """Returns (witness point or None, whether any point of C was seen)."""
    n = C.n
    ny = float(np.linalg.norm(y))
    seen = False
    origin = np.zeros((1, n))
    if C.contains(origin)[0]:
        seen = True
        if ny == 0:
            return origin[0], True
    y_unit = y / ny if ny > 0 else None
    used = 0
    batches = []
    if y_unit is not None:
        batches.append(_targeted(y_unit, eps))
    while used < budget:
        if batches:
            cand = batches.pop(0)[: budget - used]
        else:
            m = min(2048, budget - used)
            if y_unit is not None:
                half = m // 2
                cand = np.vstack([_random(rng, y_unit, eps, m - half), _ball(rng, n, eps, half)])
            else:
                cand = _ball(rng, n, eps, m)
        used += len(cand)
        caps = 0.5 * np.linalg.norm(cand, axis=1)
        pts = C.project(cand, caps)
        inside = C.contains(pts) & (np.linalg.norm(pts, axis=1) < eps)
        if np.any(inside):
            seen = True
        ok, _, _ = _witness_mask(pts, y, eps)
        ok &= inside
        if np.any(ok):
            idx = int(np.argmax(ok))
            return pts[idx], True
    return None, seen


def _conjunct_run(C: Conjunct, y: tuple, schedule, budget: int, seed: int):
    key = (C.key, y, tuple(schedule), budget, seed)
    hit = _CACHE.get(key)
    if hit is not None:
        return hit
    yf = np.array([float(c) for c in y])
    witnesses = []
    starved_at = None
    failed_at = None
    for eps in schedule:
        rng = np.random.default_rng([seed % (2**32), C.digest(y, eps) % (2**32)])
        pt, seen = _search_eps(C, yf, eps, budget, rng)
        if pt is None:
            if seen:
                failed_at = eps
            else:
                starved_at = eps
            break
        witnesses.append((eps, pt))
    out = (witnesses, failed_at, starved_at)
    _CACHE[key] = out
    return out


def cone_membership_numeric(
    q: ConeQuery,
    schedule: Sequence[float] = DEFAULT_SCHEDULE,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
) -> ConeVerdict:
    schedule = tuple(float(e) for e in schedule)
    if not schedule or any(e <= 0 for e in schedule) or any(b >= a for a, b in zip(schedule, schedule[1:])):
        raise ValueError("schedule must be positive and strictly decreasing")
    Xp = q.X.translate(q.p)
    conj = [C for C in conjuncts_of(Xp) if not C.empty]
    if not conj:
        return ConeVerdict(UNSUPPORTED, "numeric", True, None, "the set is empty")
    pf = np.array([float(c) for c in q.p])
    yf = np.array([float(c) for c in q.y])
    any_seen = False
    best = None
    for C in conj:
        witnesses, failed_at, starved_at = _conjunct_run(C, q.y, schedule, budget, seed)
        if len(witnesses) == len(schedule):
            rows = []
            for eps, pt in witnesses:
                _, a, resid = _witness_mask(pt[None, :], yf, eps)
                rows.append(
                    {"eps": eps, "x": [float(v) for v in pf + pt], "a": float(a[0]), "residual": float(resid[0])}
                )
            return ConeVerdict(SUPPORTED, "numeric", False, {"kind": "sequence", "steps": rows})
        if failed_at is not None:
            any_seen = True
            best = failed_at if best is None else max(best, failed_at)
    if any_seen:
        return ConeVerdict(
            UNSUPPORTED, "numeric", False, None, f"no witness within budget at eps={best:.3g}"
        )
    return ConeVerdict(INDETERMINATE, "numeric", False, None, "sampling starved: no points of the set found near p")
