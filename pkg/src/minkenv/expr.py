"""Expressions in one variable ``t``: parsing, printing and dual evaluation.

Grammar (lowest to highest precedence)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?          # right associative
    atom   := NUMBER | 't' | 'pi' | 'e' | FUNC '(' expr ')' | '(' expr ')'

so ``-t^2`` is ``-(t^2)`` and ``2^-t`` is accepted.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from . import dual
from .dual import Dual, DomainError

__all__ = [
    "Num", "Var", "Unary", "Binary", "ExprAst", "ParseError", "DomainError",
    "parse", "to_source", "eval_dual", "evaluate", "is_constant",
]

UNARY_FUNCS = ("neg",) + tuple(dual.FUNCTIONS)
BINARY_OPS = ("+", "-", "*", "/", "^")
CONSTANTS = {"pi": math.pi, "e": math.e}


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str = "t"


@dataclass(frozen=True)
class Unary:
    op: str
    arg: "ExprAst"

    def __post_init__(self):
        if self.op not in UNARY_FUNCS:
            raise ValueError(f"unknown unary op {self.op!r}")


@dataclass(frozen=True)
class Binary:
    op: str
    left: "ExprAst"
    right: "ExprAst"

    def __post_init__(self):
        if self.op not in BINARY_OPS:
            raise ValueError(f"unknown binary op {self.op!r}")


ExprAst = Union[Num, Var, Unary, Binary]


class ParseError(ValueError):
    def __init__(self, position: int, expected: str, src: str = ""):
        self.position = position
        self.expected = expected
        self.src = src
        super().__init__(f"at position {position}: expected {expected}")


_TOKEN = re.compile(r"\s*(?:(\d+\.?\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)|([A-Za-z_]\w*)|(\S))")


def _tokenize(src: str):
    toks = []
    pos = 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None:  # only trailing whitespace left
            break
        num, name, sym = m.groups()
        start = m.start(m.lastindex)
        if num is not None:
            toks.append(("num", num, start))
        elif name is not None:
            toks.append(("name", name, start))
        else:
            toks.append(("sym", sym, start))
        pos = m.end()
    toks.append(("end", "", len(src)))
    return toks


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.toks = _tokenize(src)
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def error(self, expected):
        raise ParseError(self.tok[2], expected, self.src)

    def accept(self, sym):
        if self.tok[0] == "sym" and self.tok[1] == sym:
            self.i += 1
            return True
        return False

    def expect(self, sym):
        if not self.accept(sym):
            self.error(f"'{sym}'")

    def parse(self) -> ExprAst:
        node = self.expr()
        if self.tok[0] != "end":
            self.error("operator or end of input")
        return node

    def expr(self):
        node = self.term()
        while self.tok[0] == "sym" and self.tok[1] in "+-":
            op = self.tok[1]
            self.i += 1
            node = Binary(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.tok[0] == "sym" and self.tok[1] in "*/":
            op = self.tok[1]
            self.i += 1
            node = Binary(op, node, self.unary())
        return node

    def unary(self):
        if self.accept("-"):
            return Unary("neg", self.unary())
        if self.accept("+"):
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.accept("^"):
            return Binary("^", base, self.unary())
        return base

    def atom(self):
        kind, text, _ = self.tok
        if kind == "num":
            self.i += 1
            return Num(float(text))
        if kind == "name":
            self.i += 1
            if text == "t":
                return Var()
            if text in CONSTANTS:
                return Num(CONSTANTS[text])
            if text in dual.FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Unary(text, arg)
            self.i -= 1
            self.error(f"variable 't', a constant or one of {sorted(dual.FUNCTIONS)}")
        if self.accept("("):
            node = self.expr()
            self.expect(")")
            return node
        self.error("number, 't', function or '('")


def parse(src: str) -> ExprAst:
    """Parse infix text into an AST; raises :class:`ParseError` with a 0-based position."""
    return _Parser(src).parse()


def to_source(node: ExprAst) -> str:
    """Fully parenthesised text that parses back to an equivalent tree."""
    if isinstance(node, Num):
        if not math.isfinite(node.value):
            raise ValueError("cannot print a non-finite constant")
        text = repr(float(node.value))
        return f"({text})" if node.value < 0 else text
    if isinstance(node, Var):
        return "t"
    if isinstance(node, Unary):
        if node.op == "neg":
            return f"(-{to_source(node.arg)})"
        return f"{node.op}({to_source(node.arg)})"
    return f"({to_source(node.left)} {node.op} {to_source(node.right)})"


def is_constant(node: ExprAst) -> bool:
    if isinstance(node, Num):
        return True
    if isinstance(node, Var):
        return False
    if isinstance(node, Unary):
        return is_constant(node.arg)
    return is_constant(node.left) and is_constant(node.right)


def _eval(node: ExprAst, t: Dual) -> Dual:
    if isinstance(node, Num):
        return Dual(node.value, 0.0)
    if isinstance(node, Var):
        return t
    if isinstance(node, Unary):
        x = _eval(node.arg, t)
        if node.op == "neg":
            return -x
        return dual.FUNCTIONS[node.op](x)
    a = _eval(node.left, t)
    if node.op == "^":
        if is_constant(node.right):
            p = _eval(node.right, Dual(0.0, 0.0)).val
            if float(p).is_integer():
                return a ** int(p)
            return dual.rpow(a, Dual(p, 0.0))
        return dual.rpow(a, _eval(node.right, t))
    b = _eval(node.right, t)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    return a / b


def _broadcast(d: Dual, t) -> Dual:
    shape = np.shape(t)
    if shape == ():
        return Dual(float(d.val), float(d.der))
    return Dual(np.broadcast_to(np.asarray(d.val, float), shape).copy(),
                np.broadcast_to(np.asarray(d.der, float), shape).copy())


def eval_dual(node: ExprAst, t) -> Dual:
    """Value and exact first derivative at ``t`` (scalar or array)."""
    tt = np.asarray(t, dtype=float) if np.ndim(t) else float(t)
    one = np.ones_like(tt) if np.ndim(tt) else 1.0
    with np.errstate(over="ignore", invalid="ignore"):
        out = _broadcast(_eval(node, Dual(tt, one)), tt)
    if not (np.all(np.isfinite(out.val)) and np.all(np.isfinite(out.der))):
        raise DomainError("evaluation produced a non-finite value")
    return out


_VALUE_FUNCS = {
    "sqrt": np.sqrt, "exp": np.exp, "log": np.log, "sinh": np.sinh,
    "cosh": np.cosh, "tanh": np.tanh, "abs": np.abs,
}


def _value(node: ExprAst, t):
    if isinstance(node, Num):
        return node.value + 0.0 * t
    if isinstance(node, Var):
        return t
    if isinstance(node, Unary):
        x = _value(node.arg, t)
        if node.op == "neg":
            return -x
        if node.op == "sqrt" and np.any(x < 0):
            raise DomainError("sqrt of negative argument")
        if node.op == "log" and np.any(x <= 0):
            raise DomainError("log of non-positive argument")
        return _VALUE_FUNCS[node.op](x)
    a, b = _value(node.left, t), _value(node.right, t)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    if node.op == "/":
        if np.any(b == 0):
            raise DomainError("division by zero")
        return a / b
    if is_constant(node.right) and float(np.max(b)).is_integer():
        k = int(np.max(b))
        if k < 0 and np.any(a == 0):
            raise DomainError("negative power of zero")
        return a**k if k >= 0 else 1.0 / a ** (-k)
    if np.any(a <= 0):
        raise DomainError("real power requires a positive base")
    return np.exp(b * np.log(a))


def evaluate(node: ExprAst, t):
    """Plain value, no derivative (so ``abs(0)`` and ``sqrt(0)`` are allowed)."""
    tt = np.asarray(t, dtype=float)
    with np.errstate(over="ignore", invalid="ignore"):
        out = _value(node, tt)
    if not np.all(np.isfinite(out)):
        raise DomainError("evaluation produced a non-finite value")
    return float(out) if np.ndim(out) == 0 else out
