"""Discretised cones: run several engines over a grid of directions."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from ..poly import eval_rational
from ..semialg import Atom, SemialgebraicSet
from .curves import cone_membership_puiseux
from .deformation import deformation_slice_check
from .grid import sphere_grid
from .initial import cone_membership_initial
from .numeric import DEFAULT_BUDGET, DEFAULT_SCHEDULE, cone_membership_numeric
from .plane import plane_curve_cone
from .types import INDETERMINATE, SUPPORTED, UNSUPPORTED, ConeQuery, ConeVerdict, RaySet

__all__ = ["ENGINES", "ScanEntry", "ScanResult", "cone_scan", "combine_verdicts"]

ENGINES = ("numeric", "puiseux", "plane", "initial", "deformation")
DEFAULT_ENGINES = ("numeric", "puiseux")


@dataclass
class ScanEntry:
    direction: tuple
    verdicts: dict
    combined: ConeVerdict

    def to_json(self) -> dict:
        return {
            "direction": [str(c) for c in self.direction],
            "verdicts": {k: v.to_json() for k, v in sorted(self.verdicts.items())},
            "combined": self.combined.to_json(),
        }


@dataclass
class ScanResult:
    p: tuple
    resolution: int
    engines: tuple
    entries: list = field(default_factory=list)
    conflicts: list = field(default_factory=list)
    disagreements: list = field(default_factory=list)

    def supported(self, engine: str | None = None) -> list:
        """Directions supported by ``engine`` (by the combined verdict if None)."""
        out = []
        for e in self.entries:
            v = e.combined if engine is None else e.verdicts.get(engine)
            if v is not None and v.supported:
                out.append(e.direction)
        return out

    def determinate(self) -> list:
        return [e for e in self.entries if e.combined.determinate]

    def to_json(self) -> dict:
        return {
            "p": [str(c) for c in self.p],
            "resolution": self.resolution,
            "engines": list(self.engines),
            "entries": [e.to_json() for e in self.entries],
            "supported": [[str(c) for c in d] for d in self.supported()],
            "conflicts": self.conflicts,
            "disagreements": self.disagreements,
        }


def _plane_engine(X: SemialgebraicSet, p: tuple):
    F = X.formula
    if X.ambient_dim != 2 or not isinstance(F, Atom) or F.rel != "=" or F.poly.is_zero():
        return None
    if eval_rational(F.poly, p) != 0:
        return RaySet.empty(2)
    return plane_curve_cone(F.poly, p)


def _plane_verdict(R: RaySet | None, y: tuple) -> ConeVerdict:
    if R is None:
        return ConeVerdict(INDETERMINATE, "plane", False, None, "not a single plane curve equation")
    if not any(y):
        if R.apex:
            return ConeVerdict(SUPPORTED, "plane", True, {"kind": "apex"})
        return ConeVerdict(UNSUPPORTED, "plane", True, None, "the point is not on the curve")
    for r in R.rays:
        if r.contains(y):
            return ConeVerdict(SUPPORTED, "plane", True, {"kind": "ray", "ray": r.to_json()})
    for r in R.undetermined:
        if r.contains(y, 1e-12):
            return ConeVerdict(INDETERMINATE, "plane", False, None, "branch existence not certified")
    return ConeVerdict(UNSUPPORTED, "plane", True, None, "not on any branch ray")


def combine_verdicts(verdicts: dict) -> ConeVerdict:
    """Certified exact verdicts first, then the sampling engines."""
    for name in ("puiseux", "plane"):
        v = verdicts.get(name)
        if v is not None and v.determinate:
            return v
    for v in verdicts.values():
        if v.status == UNSUPPORTED and v.certified:
            return v
    for name in ("numeric", "deformation"):
        v = verdicts.get(name)
        if v is not None and v.status != INDETERMINATE:
            return v
    return ConeVerdict(INDETERMINATE, "combined", False, None, "no engine was conclusive")


def cone_scan(
    X: SemialgebraicSet,
    p: Sequence = (),
    resolution: int = 16,
    engines: Sequence[str] = DEFAULT_ENGINES,
    schedule: Sequence[float] = DEFAULT_SCHEDULE,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    directions: Sequence | None = None,
) -> ScanResult:
    """Run the selected engines on every grid direction.

    A conflict is a direction that one engine supports while another
    certifies it unsupported; a disagreement is a supported direction that
    another engine reports unsupported without a certificate.
    """
    if resolution < 1:
        raise ValueError("resolution must be at least 1")
    bad = [e for e in engines if e not in ENGINES]
    if bad:
        raise ValueError(f"unknown engine(s): {', '.join(bad)}")
    n = X.ambient_dim
    p = tuple(Fraction(v) for v in p) if len(p) else (Fraction(0),) * n
    dirs = list(directions) if directions is not None else sphere_grid(n, resolution)
    plane = _plane_engine(X, p) if "plane" in engines else None
    out = ScanResult(p, resolution, tuple(engines))
    for idx, y in enumerate(dirs):
        q = ConeQuery(X, p, y)
        verdicts = {}
        for name in engines:
            if name == "numeric":
                verdicts[name] = cone_membership_numeric(q, schedule, budget, seed)
            elif name == "deformation":
                verdicts[name] = deformation_slice_check(q, schedule, budget, seed)
            elif name == "puiseux":
                verdicts[name] = cone_membership_puiseux(q)
            elif name == "initial":
                verdicts[name] = cone_membership_initial(q)
            else:
                verdicts[name] = _plane_verdict(plane, q.y)
        entry = ScanEntry(q.y, verdicts, combine_verdicts(verdicts))
        out.entries.append(entry)
        yes = sorted(k for k, v in verdicts.items() if v.supported)
        for a in yes:
            for b, v in sorted(verdicts.items()):
                if v.status != UNSUPPORTED:
                    continue
                item = {"index": idx, "direction": [str(c) for c in q.y], "supported_by": a, "rejected_by": b}
                (out.conflicts if v.certified else out.disagreements).append(item)
    return out
