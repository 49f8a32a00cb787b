"""Tokenizer and recursive-descent helpers shared by the set and script parsers."""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .poly import Polynomial

__all__ = ["ParseError", "Token", "tokenize", "TokenStream", "VarTable"]


class ParseError(ValueError):
    def __init__(self, msg: str, pos: int | None = None, text: str | None = None):
        self.pos = pos
        if pos is not None and text is not None:
            line = text.count("\n", 0, pos) + 1
            col = pos - (text.rfind("\n", 0, pos) + 1) + 1
            msg = f"{msg} (line {line}, column {col})"
        elif pos is not None:
            msg = f"{msg} (at offset {pos})"
        super().__init__(msg)


@dataclass(frozen=True)
class Token:
    kind: str  # NUM, NAME, OP, EOF
    value: str
    pos: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<num>\d+(?:\.\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>->|<=|>=|!=|==|&&|\|\||[-+*/^(),;{}:=<>!\[\]])
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> list[Token]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        if kind != "ws":
            out.append(Token(kind.upper(), m.group(kind), pos))
        pos = m.end()
    out.append(Token("EOF", "", len(text)))
    return out


class TokenStream:
    def __init__(self, text: str, tokens: list[Token] | None = None):
        self.text = text
        self.toks = tokens if tokens is not None else tokenize(text)
        self.i = 0

    @property
    def cur(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, *values: str) -> bool:
        t = self.cur
        return t.kind in ("OP", "NAME") and t.value in values

    def take(self) -> Token:
        t = self.cur
        if t.kind != "EOF":
            self.i += 1
        return t

    def expect(self, value: str) -> Token:
        if not self.at(value):
            self.error(f"expected {value!r}, found {self.cur.value or 'end of input'!r}")
        return self.take()

    def expect_kind(self, kind: str) -> Token:
        if self.cur.kind != kind:
            self.error(f"expected {kind.lower()}, found {self.cur.value or 'end of input'!r}")
        return self.take()

    def error(self, msg: str):
        raise ParseError(msg, self.cur.pos, self.text)


class VarTable:
    """Variable names in declaration order.

    When ``frozen`` the table rejects unknown names; otherwise names are
    appended on first use.
    """

    def __init__(self, names=(), frozen: bool = False):
        self.names: list[str] = list(names)
        self.frozen = frozen

    def index(self, name: str, ts: TokenStream | None = None) -> int:
        if name in self.names:
            return self.names.index(name)
        if self.frozen:
            if ts is not None:
                ts.error(f"unknown variable {name!r}")
            raise ParseError(f"unknown variable {name!r}")
        self.names.append(name)
        return len(self.names) - 1


# Polynomials are parsed to a nested "raw" form first because the ambient
# dimension is known only after all variables have been seen.

def parse_poly_raw(ts: TokenStream, vt: VarTable):
    node = _term(ts, vt)
    while ts.at("+", "-"):
        op = ts.take().value
        rhs = _term(ts, vt)
        node = ("add", node, rhs) if op == "+" else ("sub", node, rhs)
    return node


def _term(ts, vt):
    node = _unary(ts, vt)
    while ts.at("*", "/"):
        op = ts.take().value
        rhs = _unary(ts, vt)
        node = ("mul", node, rhs) if op == "*" else ("div", node, rhs, ts.cur.pos)
    return node


def _unary(ts, vt):
    if ts.at("-"):
        ts.take()
        return ("neg", _unary(ts, vt))
    if ts.at("+"):
        ts.take()
        return _unary(ts, vt)
    return _power(ts, vt)


def _power(ts, vt):
    base = _atom(ts, vt)
    if ts.at("^"):
        ts.take()
        if ts.at("("):
            ts.take()
            tok = ts.expect_kind("NUM")
            ts.expect(")")
        else:
            tok = ts.expect_kind("NUM")
        if "." in tok.value:
            raise ParseError("exponents must be natural numbers", tok.pos, ts.text)
        return ("pow", base, int(tok.value))
    return base


def _atom(ts, vt):
    t = ts.cur
    if t.kind == "NUM":
        ts.take()
        return ("const", Fraction(t.value))
    if t.kind == "NAME":
        ts.take()
        return ("var", vt.index(t.value, ts))
    if ts.at("("):
        ts.take()
        node = parse_poly_raw(ts, vt)
        ts.expect(")")
        return node
    ts.error(f"expected a polynomial, found {t.value or 'end of input'!r}")


def build_poly(raw, n: int) -> Polynomial:
    kind = raw[0]
    if kind == "const":
        return Polynomial.const(n, raw[1])
    if kind == "var":
        return Polynomial.var(n, raw[1])
    if kind == "neg":
        return -build_poly(raw[1], n)
    if kind == "add":
        return build_poly(raw[1], n) + build_poly(raw[2], n)
    if kind == "sub":
        return build_poly(raw[1], n) - build_poly(raw[2], n)
    if kind == "mul":
        return build_poly(raw[1], n) * build_poly(raw[2], n)
    if kind == "div":
        den = build_poly(raw[2], n)
        if not den.is_constant() or den.is_zero():
            raise ParseError("division only by nonzero constants", raw[3])
        return build_poly(raw[1], n).scale(1 / den.constant_term())
    if kind == "pow":
        return build_poly(raw[1], n) ** raw[2]
    raise AssertionError(kind)


def parse_polynomial(text: str, names=None) -> tuple[Polynomial, tuple[str, ...]]:
    """Parse a standalone polynomial; returns it with its variable names."""
    ts = TokenStream(text)
    vt = VarTable(names or (), frozen=names is not None)
    raw = parse_poly_raw(ts, vt)
    if ts.cur.kind != "EOF":
        ts.error(f"unexpected {ts.cur.value!r}")
    n = max(len(vt.names), 1)
    return build_poly(raw, n), tuple(vt.names) or ("x",)
