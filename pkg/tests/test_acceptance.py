"""The ten acceptance criteria, each at its stated tolerance and time limit."""
import json
import math
import subprocess
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

from conftest import XY, XYZ, P, S
from tangentcone.cone import (
    ConeQuery,
    clear_cache,
    cone_membership_numeric,
    cone_membership_puiseux,
    cone_scan,
    plane_curve_cone,
    sphere_grid,
)
from tangentcone.poly import Polynomial
from tangentcone.puiseux import PuiseuxPoint, PuiseuxSeries, rvhat, valuation, vhat
from tangentcone.semialg import Atom, SemialgebraicSet, conj
from tangentcone.strat import (
    WHITNEY_DIAGNOSTIC,
    Stratification,
    cone_risometry_lift,
    induced_cone_strata,
    risometry_implies_equal_cones_check,
    whitney_check,
)

SURF = "x^3 - y^2 - z^2 = 0"


def T(text):
    return S(text, XYZ)


def on_positive_x(y, tol=1e-6):
    v = np.array([float(c) for c in y])
    n = np.linalg.norm(v)
    return n > 0 and np.linalg.norm(v / n - np.eye(len(v))[0]) <= tol


@pytest.fixture(autouse=True)
def fresh_caches():
    clear_cache()
    yield


def test_ac1_cusp_cone(acceptance_line):
    t0 = time.perf_counter()
    cusp = S("x^3 - y^2 = 0")
    R = plane_curve_cone(P("x^3 - y^2"), ())
    rays_ok = len(R.rays) == 1 and R.rays[0].rational_vector() == (1, 0) and R.rays[0].side == 1
    v = cone_membership_puiseux(ConeQuery(cusp, (), (1, 0)))
    plus_ok = v.supported and v.certified and v.witness["curve"] == "(t, t^(3/2))"
    minus_ok = all(
        (w := cone_membership_puiseux(ConeQuery(cusp, (), y))).status == "unsupported" and w.certified
        for y in [(-1, 0), (0, 1)]
    )
    elapsed = time.perf_counter() - t0
    ok = rays_ok and plus_ok and minus_ok and elapsed < 1.0
    acceptance_line("AC1 cusp cone", ok, elapsed, 1, f"rays={[str(r) for r in R.rays]} witness={v.witness['curve']}")
    assert ok


def test_ac2_surface_scan(acceptance_line):
    t0 = time.perf_counter()
    X = T(SURF)
    engines = ("numeric", "puiseux", "initial", "deformation")
    sc = cone_scan(X, (), 16, engines)
    want = [e.direction for e in sc.entries if on_positive_x(e.direction)]
    got = sc.supported()
    disagreeing = []
    for e in sc.entries:
        expected = on_positive_x(e.direction)
        for name, v in e.verdicts.items():
            if v.determinate and v.supported != expected:
                disagreeing.append((name, [str(c) for c in e.direction]))
    elapsed = time.perf_counter() - t0
    ok = got == want and want and not disagreeing and not sc.conflicts and elapsed < 30
    acceptance_line(
        "AC2 surface cone scan", ok, elapsed, 30, f"supported={[[str(c) for c in d] for d in got]} disagreements={len(disagreeing)}"
    )
    assert ok


def _first():
    return Stratification([
        T("x = 0 && y = 0 && z = 0"),
        T("1 = 0"),
        T(f"{SURF} && !(x = 0 && y = 0 && z = 0)"),
        T(f"!({SURF})"),
    ])


def _second():
    return Stratification([
        T("x = 0 && y = 0 && z = 0"),
        T("x > 0 && y = 0 && z = 0"),
        T(f"{SURF} && !(x = 0 && y = 0 && z = 0)"),
        T(f"!({SURF}) && !(x > 0 && y = 0 && z = 0)"),
    ])


def _expected_index(y, ray_index):
    if not any(y):
        return 0
    return ray_index if on_positive_x(y, 0.0) else 3


def test_ac3_first_stratification(acceptance_line):
    t0 = time.perf_counter()
    I = induced_cone_strata(_first())
    dirs = [(Fraction(0),) * 3] + sphere_grid(3, 16)
    wrong = [d for d in dirs if I.index(d)[0] != _expected_index(d, 2)]
    diags = I.structural_diagnostics()
    diag_ok = any(d["index"] == 2 and d["estimated_dim"] == 1 and d["message"] == WHITNEY_DIAGNOSTIC for d in diags)
    elapsed = time.perf_counter() - t0
    ok = not wrong and diag_ok and elapsed < 30
    acceptance_line("AC3 induced strata, first", ok, elapsed, 30, f"disagreements={len(wrong)} diagnostic={diag_ok}")
    assert ok


def test_ac4_second_stratification(acceptance_line):
    t0 = time.perf_counter()
    S2 = _second()
    I = induced_cone_strata(S2)
    dirs = [(Fraction(0),) * 3] + sphere_grid(3, 16)
    wrong = [d for d in dirs if I.index(d)[0] != _expected_index(d, 1)]
    pairs = [(i, j) for i in range(4) for j in range(i + 1, 4) if not S2.is_empty(i) and not S2.is_empty(j)]
    reports = [whitney_check(S2, i, j, seeds=(0, 1, 2)) for i, j in pairs]
    bad = [r.pair for r in reports if not r.ok or r.max_defect_finest >= 1e-3]
    worst = max(r.max_defect_finest for r in reports)
    elapsed = time.perf_counter() - t0
    ok = not wrong and not bad and elapsed < 60
    acceptance_line(
        "AC4 induced strata, second + Whitney", ok, elapsed, 60,
        f"disagreements={len(wrong)} pairs={len(pairs)} bad={bad} max_finest_defect={worst:.2e}",
    )
    assert ok


def _random_plane_set(rng):
    atoms = []
    for _ in range(int(rng.integers(1, 3))):
        terms = {}
        for _ in range(int(rng.integers(1, 4))):
            a = int(rng.integers(0, 4))
            b = int(rng.integers(0, 4 - a))
            if a + b:
                terms[(a, b)] = int(rng.integers(-3, 4))
        f = Polynomial(2, terms)
        if f.is_zero():
            f = Polynomial.var(2, 1)
        atoms.append(Atom(f, ["=", "<=", ">", "!=", ">="][int(rng.integers(0, 5))]))
    return SemialgebraicSet(conj(*atoms), XY)


def _certified_then_sampled(Z):
    # exact curves first; sampling only where they stay undecided
    out = []
    for e in cone_scan(Z, (), 16, ("puiseux",)).entries:
        v = e.combined
        out.append(v if v.determinate else cone_membership_numeric(ConeQuery(Z, (), e.direction)))
    return out


def test_ac5_cone_calculus(acceptance_line):
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    violations = []
    checked = 0
    for k in range(50):
        X, Y = _random_plane_set(rng), _random_plane_set(rng)
        verdicts = {
            name: _certified_then_sampled(Z)
            for name, Z in (("X", X), ("Y", Y), ("U", X.union(Y)), ("I", X.intersection(Y)))
        }
        for i, direction in enumerate(sphere_grid(2, 16)):
            v = {name: vs[i] for name, vs in verdicts.items()}
            if not all(w.determinate for w in v.values()):
                continue
            checked += 1
            s = {name: w.supported for name, w in v.items()}
            y = [str(c) for c in direction]
            if (s["X"] and not s["U"]) or (s["Y"] and not s["U"]):
                violations.append(("monotone", k, y))
            if s["U"] != (s["X"] or s["Y"]):
                violations.append(("union", k, y))
            if s["I"] and not (s["X"] and s["Y"]):
                violations.append(("intersection", k, y))
    elapsed = time.perf_counter() - t0
    ok = not violations and elapsed < 120
    acceptance_line("AC5 cone calculus on 50 pairs", ok, elapsed, 120, f"determinate checks={checked} violations={violations[:3]}")
    assert ok


AC6_CORPUS = {
    "cusp": "x^3 - y^2",
    "node": "x^2 - y^2",
    "nodal cubic": "y^2 - x^2 - x^3",
    "parabola": "y - x^2",
    "tacnode": "y^2 - x^4",
}


def test_ac6_numeric_vs_plane(acceptance_line):
    t0 = time.perf_counter()
    grid = sphere_grid(2, 64)
    flagged = {}
    for name, text in AC6_CORPUS.items():
        X = S(f"{text} = 0")
        R = plane_curve_cone(P(text), ())
        numeric = {y for y in grid if cone_membership_numeric(ConeQuery(X, (), y)).supported}
        exact = {y for y in grid if R.contains(y, tol=1e-12)}
        diff = sorted(numeric ^ exact)
        # a disagreement is attributable to the grid only next to a true ray
        cell = 2 * math.pi / 64
        near = all(
            any(abs(math.atan2(float(y[1]), float(y[0])) - math.atan2(*r.float_vector()[::-1])) % (2 * math.pi) <= cell
                for r in R.rays)
            for y in diff
        )
        if diff:
            flagged[name] = [[str(c) for c in y] for y in diff]
        if len(diff) > 2 or not near:
            flagged[name + " (excess)"] = len(diff)
    elapsed = time.perf_counter() - t0
    ok = not any("excess" in k for k in flagged) and elapsed < 120
    acceptance_line("AC6 numeric vs plane branches (64 dirs)", ok, elapsed, 120, f"flagged={flagged}")
    assert ok


def _rand_series(rng, lo=-2, allow_zero=True):
    k = int(rng.integers(0 if allow_zero else 1, 4))
    terms = []
    for _ in range(k):
        e = Fraction(int(rng.integers(lo * 6, 24)), int(rng.integers(1, 7)))
        c = Fraction(int(rng.integers(-9, 10)) or 1, int(rng.integers(1, 5)))
        terms.append((e, c))
    return PuiseuxSeries(terms)


def test_ac7_valued_field_axioms(acceptance_line):
    t0 = time.perf_counter()
    rng = np.random.default_rng(7)
    failures = []
    checks = 0
    per = 100_000 // 3 + 1
    seen = {True: 0, False: 0}
    for _ in range(per):
        a, b = _rand_series(rng, allow_zero=False), _rand_series(rng, allow_zero=False)
        if a.is_zero() or b.is_zero():
            a, b = a + 1, b + 1
        if valuation(a * b) != valuation(a) + valuation(b):
            failures.append(("mul", a, b))
        checks += 1
        a, b = _rand_series(rng), _rand_series(rng)
        if rng.random() < 0.3:
            b = b + PuiseuxSeries([(valuation(a), int(rng.integers(-3, 4)))]) if a.terms else b
        s, va, vb = valuation(a + b), valuation(a), valuation(b)
        if s < min(va, vb) or (va != vb and s != min(va, vb)):
            failures.append(("ultrametric", a, b))
        checks += 1
        x = PuiseuxPoint([_rand_series(rng), _rand_series(rng)])
        mode = rng.random()
        if mode < 0.4:
            # y = x + something of higher or equal valuation
            bump = int(rng.integers(0, 3))
            y = PuiseuxPoint([c + (c * PuiseuxSeries([(bump, 1)]) if c.terms else 0) for c in x])
        elif mode < 0.5:
            x = y = PuiseuxPoint([0, 0])
        else:
            y = PuiseuxPoint([_rand_series(rng), _rand_series(rng)])
        same = rvhat(x) == rvhat(y)
        seen[same] += 1
        want = (x.is_zero() and y.is_zero()) or (not x.is_zero() and vhat(x - y) > vhat(x))
        if same != want:
            failures.append(("rv", x, y))
        checks += 1
    elapsed = time.perf_counter() - t0
    ok = checks >= 100_000 and not failures and min(seen.values()) > 1000 and elapsed < 30
    acceptance_line(
        "AC7 valued field axioms", ok, elapsed, 30,
        f"checks={checks} failures={len(failures)} rv equal/unequal={seen[True]}/{seen[False]}",
    )
    assert ok


def test_ac8_lift(acceptance_line):
    t0 = time.perf_counter()
    X, Y = S("y = 0"), S("y - x^2 = 0")
    phi = (P("x"), P("y + x^2"))
    rep = cone_risometry_lift(phi, X, Y, resolution=16, pairs=1000, scales=(1, 2, 3, 4))
    grid = sphere_grid(2, 16)
    sx = {y for y in grid if cone_membership_numeric(ConeQuery(X, (), y)).supported}
    sy = {y for y in grid if cone_membership_numeric(ConeQuery(Y, (), y)).supported}
    image = {tuple(Fraction(c) for c in m["image"]) for m in rep.mapped if m["supported"]}
    onto_ok = image == sy and len(image) == len(sx) and all(o["supported"] for o in rep.onto)
    rv = rep.psi_risometry
    elapsed = time.perf_counter() - t0
    ok = rep.is_identity and rep.ok and rv["passed"] == 1000 and onto_ok and elapsed < 10
    acceptance_line("AC8 risometry lift", ok, elapsed, 10, f"identity={rep.is_identity} rv={rv['passed']}/1000 onto={onto_ok}")
    assert ok


def test_ac9_cones_differ(acceptance_line):
    t0 = time.perf_counter()
    rep = risometry_implies_equal_cones_check(None, S("x^3 - y^2 = 0"), S("y = 0"), resolution=16)
    hit = [d for d in rep.differ if d["direction"] == ["-1", "0"]]
    certified = bool(hit) and hit[0]["X"]["certified"] and hit[0]["Y"]["certified"]
    elapsed = time.perf_counter() - t0
    ok = certified and "no risometry" in rep.conclusion and elapsed < 5
    acceptance_line("AC9 cusp vs line cones differ", ok, elapsed, 5, f"differ={[d['direction'] for d in rep.differ]}")
    assert ok


AC10_SCRIPT = """
vars x,y,z;
set X = x^3 - y^2 - z^2 = 0;
strat W {
  S0: x = 0 && y = 0 && z = 0;
  S1: x > 0 && y = 0 && z = 0;
  S2: x^3 - y^2 - z^2 = 0 && !(x = 0 && y = 0 && z = 0);
  S3: !(x^3 - y^2 - z^2 = 0) && !(x > 0 && y = 0 && z = 0);
}
cone-exact X;
cone-scan X grid=16 engines=(numeric,puiseux,deformation);
induced-strata W grid=16;
whitney W 0 2;
dims W;
"""


def test_ac10_determinism(acceptance_line, tmp_path):
    t0 = time.perf_counter()
    script = tmp_path / "acceptance.tc"
    script.write_text(AC10_SCRIPT)
    outs = []
    for k in range(2):
        out = tmp_path / f"run{k}.json"
        proc = subprocess.run(
            [sys.executable, "-m", "tangentcone.cli", "--script", str(script), "--json", str(out), "--seed", "11"],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0, proc.stderr + proc.stdout
        outs.append(out.read_bytes())
    same = outs[0] == outs[1]
    n_cmd = len(json.loads(outs[0])["commands"])
    elapsed = time.perf_counter() - t0
    acceptance_line("AC10 determinism", same, elapsed, None, f"commands={n_cmd} bytes={len(outs[0])}")
    assert same
