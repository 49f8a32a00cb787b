"""Cone membership through the deformation ``D(X) = {(x, r) : r*x in X}``.

The closure of ``D(X)`` meets the slice ``r = 0`` exactly in the cone of
``X`` at the origin.  The search looks, for each ``eps``, for a point
``z = r*x`` of the set with ``0 < r < eps`` and ``|x - y| < eps``.
"""
from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from ..semialg import Conjunct, conjuncts_of
from .numeric import DEFAULT_BUDGET, DEFAULT_SCHEDULE
from .types import INDETERMINATE, SUPPORTED, UNSUPPORTED, ConeQuery, ConeVerdict

__all__ = ["deformation_slice_check"]

_CACHE: dict = {}


def clear_cache():
    _CACHE.clear()


def _candidates(rng, y: np.ndarray, eps: float, m: int):
    n = y.size
    rmin = max(eps**4, 1e-150)
    u = rng.random(m)
    r = np.exp(math.log(rmin) + u * (math.log(eps) - math.log(rmin)))
    ny = float(np.linalg.norm(y))
    spread = eps * np.exp(np.log(1e-4) * rng.random(m))
    g = rng.standard_normal((m, n))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    x = y[None, :] + g * spread[:, None] * max(ny, 1.0) * 0.5
    return r, x


def _ladder(y: np.ndarray, eps: float, nrad: int = 24):
    rmin = max(eps**4, 1e-150)
    r = np.exp(np.linspace(math.log(eps * 0.9), math.log(rmin), nrad))
    return r, np.repeat(y[None, :], nrad, axis=0)


def _probe(rng, C: Conjunct, n: int, eps: float, m: int) -> bool:
    # whether the set has points near the origin at all
    rmin = max(eps**4, 1e-150)
    rad = np.exp(math.log(rmin) + rng.random(m) * (math.log(eps) - math.log(rmin)))
    g = rng.standard_normal((m, n))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    z = C.project(g * rad[:, None], 0.5 * rad)
    return bool(np.any(C.contains(z) & (np.linalg.norm(z, axis=1) < eps)))


def _search(C: Conjunct, y: np.ndarray, eps: float, budget: int, rng):
    seen = False
    used = 0
    first = True
    while used < budget:
        if first:
            r, x = _ladder(y, eps)
            first = False
        else:
            r, x = _candidates(rng, y, eps, min(2048, budget - used))
            probe = _probe(rng, C, y.size, eps, max(len(r) // 4, 1))
            seen = seen or probe
        used += len(r)
        z = r[:, None] * x
        caps = 0.5 * r * max(float(np.linalg.norm(y)), eps)
        z = C.project(z, caps)
        inside = C.contains(z)
        if np.any(inside):
            seen = True
        xs = z / r[:, None]
        ok = inside & (np.linalg.norm(xs - y[None, :], axis=1) < eps) & (r < eps)
        if np.any(ok):
            i = int(np.argmax(ok))
            return (float(r[i]), xs[i]), True
    return None, seen


def _run(C: Conjunct, y: tuple, schedule, budget: int, seed: int):
    key = (C.key, y, schedule, budget, seed)
    if key in _CACHE:
        return _CACHE[key]
    yf = np.array([float(c) for c in y])
    steps, failed, starved = [], None, None
    for eps in schedule:
        rng = np.random.default_rng([seed % (2**32), C.digest("slice", y, eps) % (2**32)])
        hit, seen = _search(C, yf, eps, budget, rng)
        if hit is None:
            if seen:
                failed = eps
            else:
                starved = eps
            break
        steps.append((eps, hit))
    out = (steps, failed, starved)
    _CACHE[key] = out
    return out


def deformation_slice_check(
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
        return ConeVerdict(UNSUPPORTED, "deformation", True, None, "the set is empty")
    any_seen = False
    for C in conj:
        steps, failed, _ = _run(C, q.y, schedule, budget, seed)
        if len(steps) == len(schedule):
            rows = [{"eps": e, "r": r, "x": [float(v) for v in x]} for e, (r, x) in steps]
            return ConeVerdict(SUPPORTED, "deformation", False, {"kind": "slice", "steps": rows})
        if failed is not None:
            any_seen = True
    if any_seen:
        return ConeVerdict(UNSUPPORTED, "deformation", False, None, "no slice witness within budget")
    return ConeVerdict(INDETERMINATE, "deformation", False, None, "sampling starved: no points of the set found near p")
