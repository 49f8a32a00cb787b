"""JSON reports and the reproducible worked examples."""
from __future__ import annotations

import json
import math
from fractions import Fraction
from pathlib import Path

import numpy as np

from .cone import (
    ConeQuery,
    cone_membership_puiseux,
    cone_scan,
    exact_cone,
    initial_form_cone,
    plane_curve_cone,
)
from .semialg import parse_set
from .strat import Stratification, dimension_condition_check, induced_cone_strata, whitney_check

__all__ = ["SCHEMA", "to_jsonable", "dumps", "emit_json", "repro_example", "EXAMPLES"]

SCHEMA = 1
EXAMPLES = ("surface3d", "cusp")


def _float(x: float):
    if math.isnan(x) or math.isinf(x):
        return str(x)
    return float(f"{x:.12g}")


def to_jsonable(obj):
    """Plain JSON data: fractions as strings, floats at 12 significant digits."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _float(float(obj))
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if hasattr(obj, "to_json"):
        return to_jsonable(obj.to_json())
    return str(obj)


def dumps(report: dict) -> str:
    data = to_jsonable(report)
    data.setdefault("schema", SCHEMA)
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def emit_json(report: dict, path=None) -> str:
    """Serialise ``report``; write it to ``path`` when given."""
    text = dumps(report)
    if path is not None:
        try:
            Path(path).write_text(text)
        except OSError as exc:
            raise OSError(f"cannot write report to {path}: {exc}") from exc
    return text


# -- worked examples -----------------------------------------------------------------------

_SURFACE = "x^3 - y^2 - z^2 = 0"
_HDR = "vars x,y,z; "


def _surface_strats():
    S0 = parse_set(_HDR + "x = 0 && y = 0 && z = 0")
    S1 = parse_set(_HDR + "1 = 0")
    S2 = parse_set(_HDR + f"{_SURFACE} && !(x = 0 && y = 0 && z = 0)")
    S3 = parse_set(_HDR + f"!({_SURFACE})")
    first = Stratification([S0, S1, S2, S3])
    T1 = parse_set(_HDR + "x > 0 && y = 0 && z = 0")
    T3 = parse_set(_HDR + f"!({_SURFACE}) && !(x > 0 && y = 0 && z = 0)")
    second = Stratification([S0, T1, S2, T3])
    return first, second


def _strat_summary(S: Stratification, cfg, pairs) -> dict:
    I = induced_cone_strata(S, (), schedule=cfg.schedule, budget=cfg.budget, seed=cfg.seed)
    sets = I.exact_sets()
    scan = I.scan(cfg.grid)
    induced_S = I.as_stratification()
    out = {
        "strata": [X.formula_str() for X in S.strata],
        "induced": [None if z is None else z.formula_str() for z in sets],
        "induced_exact_dims": [R.dimension() for R in I.exact()],
        "induced_estimated_dims": I.estimated_dims(cfg.seed),
        "diagnostics": I.structural_diagnostics(cfg.seed),
        "oracle_disagreements": len(scan["disagreements"]),
        "oracle_indeterminate": scan["indeterminate"],
        "dims_check": dimension_condition_check(S).rows,
        "induced_dims_check": None if induced_S is None else dimension_condition_check(induced_S).rows,
    }
    whit = {}
    for i, j in pairs:
        r = whitney_check(S, i, j)
        whit[f"{i},{j}"] = {"verdict": r.verdict, "defect_below_1e-3": r.max_defect_finest < 1e-3}
    out["whitney"] = whit
    if induced_S is not None:
        r = whitney_check(induced_S, 0, 2)
        out["induced_whitney_0_2"] = {"verdict": r.verdict, "diagnostic": r.diagnostic}
    return out


def _surface(cfg) -> dict:
    X = parse_set(_HDR + _SURFACE)
    R = exact_cone(X)
    scan = cone_scan(X, (), cfg.grid, ("numeric", "puiseux", "initial"), cfg.schedule, cfg.budget, cfg.seed)
    first, second = _surface_strats()
    nonempty = [(i, j) for i in range(4) for j in range(i + 1, 4) if not second.is_empty(i) and not second.is_empty(j)]
    return {
        "example": "surface3d",
        "set": X.formula_str(),
        "cone": R.to_set(X.names).formula_str(),
        "initial_form_superset": initial_form_cone(X.formula.poly, ()).formula_str(),
        "scan": {
            "grid": cfg.grid,
            "supported": [[str(c) for c in d] for d in scan.supported()],
            "conflicts": len(scan.conflicts),
            "disagreements": len(scan.disagreements),
        },
        "first_stratification": _strat_summary(first, cfg, [(0, 2)]),
        "second_stratification": _strat_summary(second, cfg, nonempty),
    }


def _cusp(cfg) -> dict:
    X = parse_set("x^3 - y^2 = 0")
    f = X.formula.poly
    R = plane_curve_cone(f, ())
    queries = {}
    for y in ((1, 0), (-1, 0), (0, 1)):
        v = cone_membership_puiseux(ConeQuery(X, (), y))
        queries[f"({y[0]}, {y[1]})"] = v.to_json()
    scan = cone_scan(X, (), cfg.grid, ("numeric", "puiseux", "plane"), cfg.schedule, cfg.budget, cfg.seed)
    return {
        "example": "cusp",
        "set": X.formula_str(),
        "rays": R.to_json(),
        "cone": R.to_set(X.names).formula_str(),
        "initial_form_superset": initial_form_cone(f, ()).formula_str(),
        "puiseux": queries,
        "scan": {
            "grid": cfg.grid,
            "supported": [[str(c) for c in d] for d in scan.supported()],
            "conflicts": len(scan.conflicts),
            "disagreements": len(scan.disagreements),
        },
    }


def repro_example(which: str, cfg=None) -> dict:
    """The result record of a worked example (``surface3d`` or ``cusp``)."""
    from .script import RunConfig

    cfg = cfg or RunConfig()
    if which == "surface3d":
        return _surface(cfg)
    if which == "cusp":
        return _cusp(cfg)
    raise ValueError(f"unknown example {which!r}; choose from {', '.join(EXAMPLES)}")
