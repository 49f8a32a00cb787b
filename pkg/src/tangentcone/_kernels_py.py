"""NumPy implementations of the numeric hot loops.

A packed system is ``k`` polynomials in ``n`` variables stored as one term
table: ``exps`` (T, n) int64, ``coeffs`` (T,) float64 and ``owner`` (T,)
int64 giving the polynomial each term belongs to.
"""
from __future__ import annotations

import numpy as np

BACKEND = "python"


def _monomials(exps, pts):
    # (m, T) products prod_i pts[:, i] ** exps[:, i]
    m = pts.shape[0]
    T = exps.shape[0]
    out = np.ones((m, T))
    for i in range(exps.shape[1]):
        e = exps[:, i]
        if np.any(e):
            out *= pts[:, i : i + 1] ** e[None, :]
    return out


def eval_packed(exps, coeffs, owner, k, pts):
    """Values and term magnitudes ``sum |c x^a|`` of each polynomial, shape (m, k)."""
    pts = np.ascontiguousarray(pts, dtype=np.float64)
    mono = _monomials(exps, pts) * coeffs[None, :]
    sel = np.zeros((exps.shape[0], k))
    sel[np.arange(exps.shape[0]), owner] = 1.0
    return mono @ sel, np.abs(mono) @ sel


def eval_grad_packed(exps, coeffs, owner, k, pts):
    """Values (m, k) and Jacobians (m, k, n)."""
    pts = np.ascontiguousarray(pts, dtype=np.float64)
    m, n = pts.shape
    T = exps.shape[0]
    sel = np.zeros((T, k))
    sel[np.arange(T), owner] = 1.0
    mono = _monomials(exps, pts) * coeffs[None, :]
    vals = mono @ sel
    jac = np.zeros((m, k, n))
    for j in range(n):
        ej = exps[:, j]
        if not np.any(ej):
            continue
        red = exps.copy()
        red[:, j] = np.maximum(ej - 1, 0)
        dm = _monomials(red, pts) * (coeffs * ej)[None, :]
        jac[:, :, j] = dm @ sel
    return vals, jac


def newton_packed(exps, coeffs, owner, k, pts, caps, iters=30, tol=1e-12):
    """Damped Gauss-Newton minimum-norm projection onto the common zero set.

    Each step is ``J^T (J J^T)^{-1} F`` with its length capped by ``caps``.
    Returns the moved points.
    """
    x = np.array(pts, dtype=np.float64, copy=True)
    caps = np.asarray(caps, dtype=np.float64)
    m, n = x.shape
    if k == 0 or m == 0:
        return x
    active = np.ones(m, dtype=bool)
    for _ in range(iters):
        idx = np.nonzero(active)[0]
        if idx.size == 0:
            break
        xa = x[idx]
        vals, jac = eval_grad_packed(exps, coeffs, owner, k, xa)
        _, mags = eval_packed(exps, coeffs, owner, k, xa)
        done = np.all(np.abs(vals) <= tol * mags, axis=1)
        active[idx[done]] = False
        keep = ~done
        if not np.any(keep):
            break
        idx, vals, jac = idx[keep], vals[keep], jac[keep]
        gram = jac @ np.transpose(jac, (0, 2, 1))
        diag = np.einsum("mii->mi", gram)
        mu = 1e-14 * np.max(diag, axis=1) + 1e-300
        gram = gram + mu[:, None, None] * np.eye(k)[None]
        try:
            lam = np.linalg.solve(gram, vals[:, :, None])[:, :, 0]
        except np.linalg.LinAlgError:
            lam = np.zeros_like(vals)
        step = np.einsum("mkn,mk->mn", jac, lam)
        norm = np.linalg.norm(step, axis=1)
        c = caps[idx]
        scale = np.where(norm > c, c / np.maximum(norm, 1e-300), 1.0)
        x[idx] -= step * scale[:, None]
    return x
