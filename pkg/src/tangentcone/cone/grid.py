"""Rational direction grids on the unit sphere."""
from __future__ import annotations

import math
from fractions import Fraction

__all__ = ["sphere_grid"]

_EIGHTH = [(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)]


def _rat(x: float, den: int) -> Fraction:
    if abs(x) < 1e-15:
        return Fraction(0)
    return Fraction(x).limit_denominator(den)


def sphere_grid(n: int, resolution: int, den: int = 10**6) -> list[tuple[Fraction, ...]]:
    """``resolution`` rational directions, deterministic and ordered.

    In the plane these are the equally spaced angles ``2*pi*k/N``; angles
    that are multiples of ``pi/4`` get exact small integer vectors so that
    axis and diagonal directions are represented without rounding.  In
    higher dimension the signed coordinate axes come first, followed by a
    Fibonacci spiral (for n = 3) or a low-discrepancy fill.
    """
    if resolution < 1:
        raise ValueError("resolution must be at least 1")
    if n == 1:
        return [(Fraction(1),), (Fraction(-1),)][: max(1, min(resolution, 2))]
    if n == 2:
        out = []
        for k in range(resolution):
            q = Fraction(8 * k, resolution)
            if q.denominator == 1:
                a, b = _EIGHTH[int(q) % 8]
                out.append((Fraction(a), Fraction(b)))
            else:
                th = 2 * math.pi * k / resolution
                out.append((_rat(math.cos(th), den), _rat(math.sin(th), den)))
        return out
    out = []
    for i in range(n):
        for s in (1, -1):
            v = [Fraction(0)] * n
            v[i] = Fraction(s)
            out.append(tuple(v))
    out = out[:resolution]
    extra = resolution - len(out)
    golden = (1 + 5**0.5) / 2
    for m in range(extra):
        if n == 3:
            z = 1 - 2 * (m + 0.5) / extra
            r = math.sqrt(max(0.0, 1 - z * z))
            th = 2 * math.pi * m / golden
            v = [r * math.cos(th), r * math.sin(th), z]
        else:
            # Halton-type fill mapped through the Gaussian-free spherical box
            v = []
            for i in range(n):
                base = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29][i % 10]
                f, x, k = 1.0, 0.0, m + 1
                while k:
                    f /= base
                    x += f * (k % base)
                    k //= base
                v.append(2 * x - 1)
            nv = math.sqrt(sum(c * c for c in v)) or 1.0
            v = [c / nv for c in v]
        out.append(tuple(_rat(c, den) for c in v))
    return out
