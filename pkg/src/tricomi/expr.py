"""A small expression language for the data functions of a config file.

Grammar (lowest to highest precedence)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?          # right associative
    atom   := number | name | name '(' expr ')' | '(' expr ')'

Names are the slot variables, the constants ``pi`` and ``e``, or one of the
functions sin, cos, exp, sqrt, abs. Evaluation is vectorised with numpy.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

FUNCTIONS = {"sin": np.sin, "cos": np.cos, "exp": np.exp, "sqrt": np.sqrt, "abs": np.abs}
CONSTANTS = {"pi": math.pi, "e": math.e}


class ExprError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at offset {pos}")
        self.pos = pos


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Node"


Node = Union[Num, Var, Neg, BinOp, Call]

_TOKEN = re.compile(r"\s*(?:(\d+\.?\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


def _tokenize(src: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while True:
        m = _TOKEN.match(src, pos)
        if m is None:
            break
        if m.group(1):
            out.append(("num", m.group(1), m.start(1)))
        elif m.group(2):
            out.append(("name", m.group(2), m.start(2)))
        else:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ExprError(f"unexpected character {ch!r}", m.start(3))
            out.append(("op", ch, m.start(3)))
        pos = m.end()
    out.append(("end", "", len(src)))
    return out


class _Parser:
    def __init__(self, src: str, allowed: frozenset[str]):
        self.toks = _tokenize(src)
        self.i = 0
        self.allowed = allowed

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, ch: str):
        kind, val, pos = self.take()
        if kind != "op" or val != ch:
            raise ExprError(f"expected {ch!r}", pos)

    def expr(self) -> Node:
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.take()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Node:
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            return BinOp("^", base, self.unary())
        return base

    def atom(self) -> Node:
        kind, val, pos = self.take()
        if kind == "num":
            return Num(float(val))
        if kind == "name":
            if val in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(val, arg)
            if val in CONSTANTS:
                return Var(val)
            if val in self.allowed:
                return Var(val)
            raise ExprError(f"unknown identifier {val!r} (allowed variables: {', '.join(sorted(self.allowed)) or 'none'})", pos)
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect(")")
            return node
        if kind == "end":
            raise ExprError("unexpected end of expression", pos)
        raise ExprError(f"unexpected {val!r}", pos)


def parse_expression(src: str, allowed_vars=()) -> Node:
    p = _Parser(src, frozenset(allowed_vars))
    node = p.expr()
    kind, val, pos = p.peek()
    if kind != "end":
        raise ExprError(f"unexpected {val!r}", pos)
    return node


def evaluate(node: Node, env: dict):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        if node.name in env:
            return env[node.name]
        return CONSTANTS[node.name]
    if isinstance(node, Neg):
        return -evaluate(node.arg, env)
    if isinstance(node, Call):
        return FUNCTIONS[node.func](evaluate(node.arg, env))
    a = evaluate(node.left, env)
    b = evaluate(node.right, env)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    if node.op == "/":
        return a / b
    return np.power(a, b)


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}


def to_source(node: Node) -> str:
    """Print with the parentheses needed to parse back to the same tree."""
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Call):
        return f"{node.func}({to_source(node.arg)})"
    if isinstance(node, Neg):
        inner = to_source(node.arg)
        if isinstance(node.arg, BinOp) and node.arg.op != "^":
            inner = f"({inner})"
        return f"-{inner}"
    p = _PREC[node.op]
    left = to_source(node.left)
    right = to_source(node.right)
    if node.op == "^":
        # the base is an atom; the exponent is a unary expression
        if not isinstance(node.left, (Num, Var, Call)) or (isinstance(node.left, Num) and node.left.value < 0):
            left = f"({left})"
        if isinstance(node.right, BinOp) and node.right.op != "^":
            right = f"({right})"
        return f"{left}^{right}"
    if isinstance(node.left, BinOp) and _PREC[node.left.op] < p:
        left = f"({left})"
    if isinstance(node.right, BinOp) and _PREC[node.right.op] <= p:
        right = f"({right})"
    if isinstance(node.right, Neg) or (isinstance(node.right, Num) and node.right.value < 0):
        right = f"({right})"
    return f"{left} {node.op} {right}"


class Expression:
    """A parsed expression bound to an ordered list of argument names."""

    def __init__(self, src: str, args: tuple[str, ...]):
        self.src = src
        self.args = args
        self.ast = parse_expression(src, args)

    def __call__(self, *values):
        env = dict(zip(self.args, values))
        out = evaluate(self.ast, env)
        shape = np.broadcast(*[np.asarray(v) for v in values]).shape if values else ()
        return np.broadcast_to(np.asarray(out, dtype=float), shape).copy() if shape else np.asarray(out, dtype=float)

    def __repr__(self):
        return f"Expression({self.src!r}, {self.args})"
