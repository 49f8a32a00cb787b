"""The problem-script language and its interpreter.

A script is a sequence of ``;``-terminated statements::

    vars x, y;
    set C = x^3 - y^2 = 0;
    point o = (0, 0);
    map phi = (x, y + x^2);
    strat S { S0: x = 0 && y = 0; S1: ...; S2: ...; }
    cone C p=o y=(1,0);
    cone-scan C grid=16 engines=numeric,puiseux;
    whitney S 0 2 seeds=(0,1,2) index=off;

Declarations must precede their use and a script has one ambient space.
Commands: cone, cone-scan, cone-exact, induced-strata, whitney, risometry,
lift, dims, repro-example.
"""
from __future__ import annotations

import re
import time
from dataclasses import dataclass
from fractions import Fraction

from .cone import (
    DEFAULT_BUDGET,
    DEFAULT_SCHEDULE,
    ENGINES,
    ConeQuery,
    combine_verdicts,
    cone_membership_initial,
    cone_membership_numeric,
    cone_membership_puiseux,
    cone_scan,
    deformation_slice_check,
    exact_cone,
)
from .cone.scan import _plane_engine, _plane_verdict
from .parsing import ParseError, parse_polynomial
from .puiseux import truncation_order
from .semialg import SemialgebraicSet, parse_set
from .strat import (
    Stratification,
    cone_risometry_lift,
    dimension_condition_check,
    induced_cone_strata,
    risometry_implies_equal_cones_check,
    whitney_check,
)

__all__ = ["RunConfig", "Statement", "parse_script", "run_script", "COMMANDS"]

COMMANDS = (
    "cone",
    "cone-scan",
    "cone-exact",
    "induced-strata",
    "whitney",
    "risometry",
    "lift",
    "dims",
    "repro-example",
)
_DECLS = ("vars", "set", "point", "map", "strat")


@dataclass
class RunConfig:
    seed: int = 0
    schedule: tuple = DEFAULT_SCHEDULE
    budget: int = DEFAULT_BUDGET
    trunc: Fraction | None = None
    engines: tuple = ("numeric", "puiseux")
    grid: int = 16
    strict: bool = False
    timing: bool = False

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "eps_schedule": list(self.schedule),
            "budget": self.budget,
            "trunc": None if self.trunc is None else str(self.trunc),
            "engines": list(self.engines),
            "grid": self.grid,
        }


@dataclass
class Statement:
    keyword: str
    body: str
    pos: int  # offset of the body in the script
    text: str  # the whole statement, for reports


def _split(text: str) -> list[Statement]:
    out = []
    i = 0
    n = len(text)
    while i < n:
        # skip blanks and comments
        m = re.compile(r"(\s+|#[^\n]*)*").match(text, i)
        i = m.end()
        if i >= n:
            break
        start = i
        depth = 0
        brace = False
        while i < n:
            ch = text[i]
            if ch == "#":
                j = text.find("\n", i)
                i = n if j < 0 else j
                continue
            if ch in "({[":
                depth += 1
                brace = brace or ch == "{"
            elif ch in ")}]":
                depth -= 1
                if depth < 0:
                    raise ParseError("unbalanced bracket", i, text)
                if ch == "}" and depth == 0:
                    i += 1
                    # an optional ';' may follow a block
                    m2 = re.compile(r"\s*;").match(text, i)
                    if m2:
                        i = m2.end()
                    break
            elif ch == ";" and depth == 0:
                i += 1
                break
            i += 1
        else:
            if depth:
                raise ParseError("unterminated bracket", start, text)
            if not brace:
                raise ParseError("missing ';' at end of statement", start, text)
        raw = text[start:i].rstrip().rstrip(";").rstrip()
        kw = re.match(r"[A-Za-z][A-Za-z0-9_-]*", raw)
        if not kw:
            raise ParseError("expected a statement keyword", start, text)
        word = kw.group(0)
        body_off = kw.end()
        out.append(Statement(word, raw[body_off:], start + body_off, raw))
    return out


def _words(body: str) -> list[str]:
    """Whitespace-separated words; brackets keep their contents together."""
    out, cur, depth = [], "", 0
    for ch in body:
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
        if ch.isspace() and depth == 0:
            if cur:
                out.append(cur)
            cur = ""
        else:
            cur += ch
    if cur:
        out.append(cur)
    return out


def _rational(s: str) -> Fraction:
    try:
        return Fraction(s.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"not a rational number: {s!r}") from exc


def _tuple(s: str) -> tuple:
    s = s.strip()
    if not (s.startswith("(") and s.endswith(")")):
        raise ParseError(f"expected a tuple like (1, 0), got {s!r}")
    inner = s[1:-1].strip()
    return tuple(_rational(v) for v in inner.split(",")) if inner else ()


def _items(s: str) -> list[str]:
    """``a,b,c`` or ``(a, b, c)`` as a list of stripped words."""
    s = s.strip()
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    return [v.strip() for v in s.split(",") if v.strip()]


def _top_split(s: str, sep: str = ",") -> list[str]:
    out, cur, depth = [], "", 0
    for ch in s:
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
        if ch == sep and depth == 0:
            out.append(cur)
            cur = ""
        else:
            cur += ch
    out.append(cur)
    return out


class _Env:
    def __init__(self):
        self.names: tuple | None = None
        self.sets: dict = {}
        self.points: dict = {}
        self.maps: dict = {}
        self.strats: dict = {}


def parse_script(text: str) -> list[Statement]:
    """Split a script into statements, checking keywords."""
    stmts = _split(text)
    for st in stmts:
        if st.keyword not in _DECLS and st.keyword not in COMMANDS:
            raise ParseError(f"unknown statement {st.keyword!r}", st.pos - len(st.keyword), text)
    return stmts


def _err(msg: str, st: Statement, text: str, offset: int = 0) -> ParseError:
    return ParseError(msg, st.pos + offset, text)


def _parse_body_set(body: str, env: _Env, st: Statement, text: str, offset: int) -> SemialgebraicSet:
    try:
        return parse_set(body, env.names)
    except ParseError as exc:
        pos = exc.pos if exc.pos is not None else 0
        msg = str(exc).split(" (")[0]
        raise _err(msg, st, text, offset + pos) from None


def _declare(st: Statement, env: _Env, text: str):
    body = st.body
    if st.keyword == "vars":
        names = tuple(v.strip() for v in body.split(",") if v.strip())
        if not names or any(not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", v) for v in names):
            raise _err("bad variable list", st, text)
        if env.names is not None and env.names != names:
            raise _err("a script has a single ambient space", st, text)
        env.names = names
        return
    m = re.match(r"\s*([A-Za-z_][A-Za-z0-9_]*)\s*", body)
    if not m:
        raise _err(f"{st.keyword} needs a name", st, text)
    name = m.group(1)
    rest = body[m.end():]
    if st.keyword == "strat":
        if not (rest.startswith("{") and rest.rstrip().endswith("}")):
            raise _err("strat needs a { ... } block", st, text, m.end())
        inner = rest[1:rest.rstrip().rfind("}")]
        base = m.end() + 1
        strata = {}
        for part in _top_split(inner, ";"):
            if not part.strip():
                base += len(part) + 1
                continue
            mm = re.match(r"\s*S(\d+)\s*:", part)
            if not mm:
                raise _err("strata are written 'S<i>: formula'", st, text, base)
            strata[int(mm.group(1))] = _parse_body_set(part[mm.end():], env, st, text, base + mm.end())
            if env.names is None:
                env.names = strata[int(mm.group(1))].names
            base += len(part) + 1
        if sorted(strata) != list(range(len(strata))):
            raise _err("strata must be numbered S0, S1, ... without gaps", st, text)
        env.strats[name] = Stratification([strata[i] for i in range(len(strata))])
        return
    if not rest.startswith("="):
        raise _err(f"expected '=' after {name}", st, text, m.end())
    value = rest[1:]
    off = m.end() + 1
    if st.keyword == "set":
        S = _parse_body_set(value, env, st, text, off)
        if env.names is None:
            env.names = S.names
        env.sets[name] = S
    elif st.keyword == "point":
        env.points[name] = _tuple(value)
    elif st.keyword == "map":
        if env.names is None:
            raise _err("declare vars before a map", st, text)
        v = value.strip()
        if not (v.startswith("(") and v.endswith(")")):
            raise _err("a map is a tuple of polynomials", st, text, off)
        comps = []
        for piece in _top_split(v[1:-1]):
            try:
                f, _ = parse_polynomial(piece, env.names)
            except ParseError as exc:
                raise _err(str(exc), st, text, off) from None
            comps.append(f)
        if len(comps) != len(env.names):
            raise _err("a map must have one component per variable", st, text, off)
        env.maps[name] = tuple(comps)


def _options(words: list[str]) -> tuple[list, dict]:
    pos, opts = [], {}
    for w in words:
        if "=" in w and not w.startswith("("):
            k, v = w.split("=", 1)
            opts[k] = v
        else:
            pos.append(w)
    return pos, opts


def _point(v: str | None, env: _Env) -> tuple:
    if v is None or v.strip() == "0":
        return ()
    if v in env.points:
        return env.points[v]
    return _tuple(v)


def _lookup(kind: dict, name: str, what: str):
    if name not in kind:
        raise KeyError(f"unknown {what} {name!r}")
    return kind[name]


def _engines(v: str | None, cfg: RunConfig) -> tuple:
    if v is None:
        return cfg.engines
    out = tuple(_items(v))
    bad = [e for e in out if e not in ENGINES]
    if bad:
        raise ValueError(f"unknown engine(s): {', '.join(bad)}")
    return out


def _run_engines(q: ConeQuery, engines, cfg: RunConfig) -> dict:
    out = {}
    for name in engines:
        if name == "numeric":
            out[name] = cone_membership_numeric(q, cfg.schedule, cfg.budget, cfg.seed)
        elif name == "puiseux":
            out[name] = cone_membership_puiseux(q)
        elif name == "initial":
            out[name] = cone_membership_initial(q)
        elif name == "deformation":
            out[name] = deformation_slice_check(q, cfg.schedule, cfg.budget, cfg.seed)
        elif name == "plane":
            out[name] = _plane_verdict(_plane_engine(q.X, q.p), q.y)
    return out


def _cmd_cone(pos, opts, env, cfg):
    X = _lookup(env.sets, pos[0], "set")
    y = _point(opts.get("y"), env)
    if not y:
        y = (0,) * X.ambient_dim
    q = ConeQuery(X, _point(opts.get("p"), env), y)
    verdicts = _run_engines(q, _engines(opts.get("engines"), cfg), cfg)
    combined = combine_verdicts(verdicts)
    status = "ok" if combined.determinate else "indeterminate"
    return status, {
        "set": pos[0],
        "p": [str(c) for c in q.p],
        "y": [str(c) for c in q.y],
        "verdicts": {k: v.to_json() for k, v in verdicts.items()},
        "combined": combined.to_json(),
    }


def _cmd_scan(pos, opts, env, cfg):
    X = _lookup(env.sets, pos[0], "set")
    grid = int(opts.get("grid", cfg.grid))
    S = cone_scan(X, _point(opts.get("p"), env), grid, _engines(opts.get("engines"), cfg), cfg.schedule, cfg.budget, cfg.seed)
    res = S.to_json()
    res["set"] = pos[0]
    if S.conflicts:
        return "violation", res
    if any(not e.combined.determinate for e in S.entries):
        return "indeterminate", res
    return "ok", res


def _cmd_exact(pos, opts, env, cfg):
    X = _lookup(env.sets, pos[0], "set")
    R = exact_cone(X, _point(opts.get("p"), env))
    if R is None:
        return "indeterminate", {"set": pos[0], "cone": None, "reason": "no exact method applies"}
    Z = R.to_set(X.names)
    return "ok", {"set": pos[0], "cone": R.to_json(), "formula": None if Z is None else Z.formula_str()}


def _cmd_induced(pos, opts, env, cfg):
    S = _lookup(env.strats, pos[0], "stratification")
    grid = int(opts.get("grid", cfg.grid))
    I = induced_cone_strata(S, _point(opts.get("p"), env), schedule=cfg.schedule, budget=cfg.budget, seed=cfg.seed)
    res = I.to_json(grid)
    res["strat"] = pos[0]
    if res["scan"]["disagreements"]:
        return "violation", res
    if res["scan"]["indeterminate"]:
        return "indeterminate", res
    return "ok", res


def _cmd_whitney(pos, opts, env, cfg):
    S = _lookup(env.strats, pos[0], "stratification")
    seeds = tuple(int(s) for s in _items(opts.get("seeds", "0,1,2")))
    convention = opts.get("index", "on") != "off"
    if len(pos) >= 3:
        pairs = [(int(pos[1]), int(pos[2]))]
    else:
        pairs = [(i, j) for i in range(len(S)) for j in range(i + 1, len(S)) if not S.is_empty(i) and not S.is_empty(j)]
    reports = [
        whitney_check(S, i, j, _point(opts.get("p"), env), seeds=seeds, index_convention=convention) for i, j in pairs
    ]
    status = "ok"
    if any(r.verdict in ("violation", "structural failure") for r in reports):
        status = "violation"
    elif any(r.verdict == "indeterminate" for r in reports):
        status = "indeterminate"
    return status, {"strat": pos[0], "pairs": [r.to_json() for r in reports]}


def _cmd_risometry(pos, opts, env, cfg):
    # risometry [phi|none] X Y
    phi = None if pos[0] == "none" else _lookup(env.maps, pos[0], "map")
    X = _lookup(env.sets, pos[1], "set")
    Y = _lookup(env.sets, pos[2], "set")
    grid = int(opts.get("grid", cfg.grid))
    rep = risometry_implies_equal_cones_check(
        phi, X, Y, _point(opts.get("p"), env), grid, cfg.seed, _engines(opts.get("engines"), cfg), cfg.schedule, cfg.budget
    )
    res = rep.to_json()
    res.update({"map": pos[0], "X": pos[1], "Y": pos[2]})
    if phi is not None and rep.differ:
        return "violation", res
    return "ok", res


def _cmd_lift(pos, opts, env, cfg):
    phi = _lookup(env.maps, pos[0], "map")
    X = _lookup(env.sets, pos[1], "set")
    Y = _lookup(env.sets, pos[2], "set")
    grid = int(opts.get("grid", cfg.grid))
    pairs = int(opts.get("pairs", 1000))
    rep = cone_risometry_lift(phi, X, Y, resolution=grid, pairs=pairs, seed=cfg.seed, schedule=cfg.schedule, budget=cfg.budget)
    res = rep.to_json()
    res.update({"map": pos[0], "X": pos[1], "Y": pos[2]})
    return ("ok" if rep.ok else "violation"), res


def _cmd_dims(pos, opts, env, cfg):
    S = _lookup(env.strats, pos[0], "stratification")
    rep = dimension_condition_check(S, _point(opts.get("p"), env))
    res = rep.to_json()
    res["strat"] = pos[0]
    if rep.violations:
        return "violation", res
    if any(r["status"] == "unknown" for r in rep.rows):
        return "indeterminate", res
    return "ok", res


def _cmd_repro(pos, opts, env, cfg):
    from .report import repro_example  # report imports this module

    which = pos[0] if pos else "surface3d"
    return "ok", repro_example(which, cfg)


_HANDLERS = {
    "cone": _cmd_cone,
    "cone-scan": _cmd_scan,
    "cone-exact": _cmd_exact,
    "induced-strata": _cmd_induced,
    "whitney": _cmd_whitney,
    "risometry": _cmd_risometry,
    "lift": _cmd_lift,
    "dims": _cmd_dims,
    "repro-example": _cmd_repro,
}
_ARITY = {"cone": 1, "cone-scan": 1, "cone-exact": 1, "induced-strata": 1, "whitney": 1, "risometry": 3, "lift": 3, "dims": 1, "repro-example": 0}


def run_script(text: str, cfg: RunConfig | None = None) -> dict:
    """Execute a script; returns the report as a plain dict.

    Parse errors raise :class:`ParseError`.  A failing command is recorded
    with status ``error`` and execution continues unless ``cfg.strict``.
    """
    cfg = cfg or RunConfig()
    stmts = parse_script(text)
    env = _Env()
    records = []
    ctx = truncation_order(cfg.trunc) if cfg.trunc is not None else None
    if ctx is not None:
        ctx.__enter__()
    try:
        for st in stmts:
            if st.keyword in _DECLS:
                _declare(st, env, text)
                continue
            pos, opts = _options(_words(st.body))
            if len(pos) < _ARITY[st.keyword]:
                raise _err(f"{st.keyword} needs {_ARITY[st.keyword]} argument(s)", st, text)
            t0 = time.perf_counter()
            try:
                status, result = _HANDLERS[st.keyword](pos, opts, env, cfg)
            except (KeyError, ValueError, TypeError, ArithmeticError) as exc:
                msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
                status, result = "error", {"error": f"{type(exc).__name__}: {msg}"}
            rec = {"command": st.keyword, "statement": st.text, "status": status, "result": result}
            if cfg.timing:
                rec["wall_time"] = time.perf_counter() - t0
            records.append(rec)
            if cfg.strict and status != "ok":
                break
    finally:
        if ctx is not None:
            ctx.__exit__(None, None, None)
    return {"schema": 1, "config": cfg.to_json(), "commands": records}
