"""The small expression language for nonlinear maps g_n.

Grammar (whitespace ignored between tokens):

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := INT | 'u'DIGITS | IDENT '[n]' | '(' expr ')'
            | '-' factor | ('inv' | 'tanh') '(' expr ')'
    IDENT  := [a-z][a-z0-9_]*

``uK`` is the K-th component (1-based) of the map argument vector. ``c[n]``
is the current value of a named periodic ring-element sequence. ``/`` is
right division (a * b**-1), which is the meaningful order for quaternions.
``inv`` is the two-sided inverse. ``tanh`` is only available over the
float-complex ring and only for values with negligible imaginary part.

ASTs are plain tuples:

    ('int', k) ('u', i) ('seq', name)
    ('add'|'sub'|'mul'|'div', left, right)
    ('neg', child) ('inv', child) ('tanh', child)

format_expr renders a canonical string whose parse returns the identical
tuple tree (binary nodes fully parenthesized, unary children parenthesized).
"""

from __future__ import annotations

import cmath
import math
import re

from .errors import DivisionByNonUnit, GMapSyntaxError, TanhUnsupported
from .rings import El, FloatComplex, Ring

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<ident>[a-z][a-z0-9_]*)|(?P<punct>[-+*/()\[\]]))"
)

_FUNCS = ("inv", "tanh")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            rest = text[pos:].lstrip()
            if not rest:
                break
            raise GMapSyntaxError(f"unexpected character {rest[0]!r}", pos)
        if m.group("int") is not None:
            tokens.append(("int", m.group("int"), m.start("int")))
        elif m.group("ident") is not None:
            tokens.append(("ident", m.group("ident"), m.start("ident")))
        else:
            tokens.append(("punct", m.group("punct"), m.start("punct")))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, len(self.text))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect_punct(self, ch: str):
        kind, val, pos = self.take()
        if kind is None:
            raise GMapSyntaxError(f"expected {ch!r}, found end of expression", pos)
        if kind != "punct" or val != ch:
            raise GMapSyntaxError(f"expected {ch!r}, found {val!r}", pos)

    def parse(self):
        node = self.expr()
        kind, val, pos = self.peek()
        if kind is not None:
            raise GMapSyntaxError(f"unexpected trailing {val!r}", pos)
        return node

    def expr(self):
        node = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "punct" and val in "+-":
                self.take()
                rhs = self.term()
                node = ("add" if val == "+" else "sub", node, rhs)
            else:
                return node

    def term(self):
        node = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "punct" and val in "*/":
                self.take()
                rhs = self.factor()
                node = ("mul" if val == "*" else "div", node, rhs)
            else:
                return node

    def factor(self):
        kind, val, pos = self.take()
        if kind == "int":
            return ("int", int(val))
        if kind == "punct" and val == "-":
            return ("neg", self.factor())
        if kind == "punct" and val == "(":
            node = self.expr()
            self.expect_punct(")")
            return node
        if kind == "ident":
            if val in _FUNCS:
                self.expect_punct("(")
                node = self.expr()
                self.expect_punct(")")
                return (val, node)
            m = re.fullmatch(r"u(\d+)", val)
            if m:
                return ("u", int(m.group(1)))
            self.expect_punct("[")
            k2, v2, p2 = self.take()
            if k2 != "ident" or v2 != "n":
                raise GMapSyntaxError(f"sequence {val!r} must be indexed as {val}[n]", p2)
            self.expect_punct("]")
            return ("seq", val)
        if kind is None:
            raise GMapSyntaxError("unexpected end of expression", pos)
        raise GMapSyntaxError(f"unexpected token {val!r}", pos)


def parse_expr(text: str):
    """Parse one expression into its AST tuple tree."""
    if not isinstance(text, str) or not text.strip():
        raise GMapSyntaxError("empty expression")
    return _Parser(text).parse()


def validate_expr(ast, dim: int, seq_names, ring: Ring):
    """Reject unknown sequence names, out-of-range components, and tanh
    outside the float-complex ring. Raises GMapSyntaxError/TanhUnsupported."""
    op = ast[0]
    if op == "int":
        return
    if op == "u":
        if not (1 <= ast[1] <= dim):
            raise GMapSyntaxError(
                f"u{ast[1]} is out of range for a {dim}-component argument")
        return
    if op == "seq":
        if ast[1] not in seq_names:
            raise GMapSyntaxError(f"unknown identifier {ast[1]!r}")
        return
    if op == "tanh" and not isinstance(ring, FloatComplex):
        raise TanhUnsupported(f"tanh is only available over float-complex, not {ring}")
    for child in ast[1:]:
        validate_expr(child, dim, seq_names, ring)


def expr_identifiers(ast) -> set[str]:
    out = set()
    if ast[0] == "seq":
        out.add(ast[1])
    for child in ast[1:]:
        if isinstance(child, tuple):
            out |= expr_identifiers(child)
    return out


def eval_expr(ast, ring: Ring, u, seqs, n: int) -> El:
    """Evaluate one AST over ``ring``.

    u: tuple of El (the argument vector components); seqs: name -> tuple of El
    (periodic, indexed by n mod period); n: the current step index, attached
    to division/tanh errors so the engine can record breakdown points.
    """
    op = ast[0]
    if op == "int":
        return ring.from_int(ast[1])
    if op == "u":
        return u[ast[1] - 1]
    if op == "seq":
        vals = seqs[ast[1]]
        return vals[n % len(vals)]
    if op == "neg":
        return -eval_expr(ast[1], ring, u, seqs, n)
    if op == "inv":
        val = eval_expr(ast[1], ring, u, seqs, n)
        if not val.is_unit:
            raise DivisionByNonUnit(f"inv of non-unit {val}", n=n)
        return val.inverse()
    if op == "tanh":
        val = eval_expr(ast[1], ring, u, seqs, n)
        if not isinstance(ring, FloatComplex):
            raise TanhUnsupported(f"tanh is only available over float-complex, not {ring}", n=n)
        z = val.v
        if abs(z.imag) > ring.tol * max(1.0, abs(z.real)):
            raise TanhUnsupported(f"tanh argument {val} has a non-negligible imaginary part", n=n)
        return El(ring, complex(math.tanh(z.real), 0.0))
    left = eval_expr(ast[1], ring, u, seqs, n)
    right = eval_expr(ast[2], ring, u, seqs, n)
    if op == "add":
        return left + right
    if op == "sub":
        return left - right
    if op == "mul":
        return left * right
    if op == "div":
        if not right.is_unit:
            raise DivisionByNonUnit(f"division by non-unit {right}", n=n)
        return left * right.inverse()
    raise GMapSyntaxError(f"unknown AST node {op!r}")


def format_expr(ast) -> str:
    """Canonical rendering; parse(format_expr(t)) == t for every valid tree."""
    op = ast[0]
    if op == "int":
        return str(ast[1])
    if op == "u":
        return f"u{ast[1]}"
    if op == "seq":
        return f"{ast[1]}[n]"
    if op == "neg":
        return f"-({format_expr(ast[1])})"
    if op in ("inv", "tanh"):
        return f"{op}({format_expr(ast[1])})"
    sym = {"add": "+", "sub": "-", "mul": "*", "div": "/"}[op]
    return f"({format_expr(ast[1])} {sym} {format_expr(ast[2])})"
