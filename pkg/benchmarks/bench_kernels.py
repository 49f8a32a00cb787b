"""Time the compiled kernels against the NumPy fallback.

    python3 benchmarks/bench_kernels.py [--points 20000] [--repeat 5]

Prints one row per kernel and workload with the best-of-``repeat`` time of
each backend and the speed-up. Both backends see identical inputs.
"""
from __future__ import annotations

import argparse
import timeit

import numpy as np

from tangentcone import kernels
from tangentcone.semialg import _pack, parse_set

WORKLOADS = {
    "cusp": ("vars x,y; x^3 - y^2 = 0", 2),
    "surface": ("vars x,y,z; x^3 - y^2 - z^2 = 0", 3),
    "two curves": ("vars x,y,z; x*y - z^3 = 0 && x^2 + y^2 + z^2 - 1 = 0", 3),
    "quartic": ("vars x,y; x^4 - 3*x^2*y^2 + y^4 + x*y^3 - 2*x^3 + y = 0", 2),
}


def _polys(F):
    if hasattr(F, "poly"):
        return [F.poly]
    return [a.poly for a in F.args]


def _best(fn, repeat: int) -> float:
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def run(points: int, repeat: int, seed: int) -> list[dict]:
    found = kernels.backends()
    rows = []
    for name, (text, n) in WORKLOADS.items():
        X = parse_set(text)
        pack = _pack(_polys(X.formula), n)
        pts = np.random.default_rng(seed).uniform(-1.0, 1.0, size=(points, n))
        caps = np.full(points, 0.5)
        calls = {
            "eval": lambda mod: mod.eval_packed(*pack, pts),
            "eval+grad": lambda mod: mod.eval_grad_packed(*pack, pts),
            "newton": lambda mod: mod.newton_packed(*pack, pts, caps),
        }
        for kernel, call in calls.items():
            times = {b: _best(lambda m=mod: call(m), repeat) for b, mod in found.items()}
            rows.append({"workload": name, "kernel": kernel, **times})
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    rows = run(args.points, args.repeat, args.seed)
    have_c = "cython" in kernels.backends()
    print(f"selected backend: {kernels.BACKEND}; {args.points} points, best of {args.repeat}")
    head = f"{'workload':<12} {'kernel':<10} {'python ms':>10}"
    print(head + (f" {'cython ms':>10} {'speed-up':>9}" if have_c else ""))
    for r in rows:
        line = f"{r['workload']:<12} {r['kernel']:<10} {1e3 * r['python']:>10.2f}"
        if have_c:
            line += f" {1e3 * r['cython']:>10.2f} {r['python'] / r['cython']:>8.1f}x"
        print(line)


if __name__ == "__main__":
    main()
