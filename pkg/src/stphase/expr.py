"""Formula language for amplitudes and phases.

Grammar (whitespace is insignificant)::

    expr   := term (("+" | "-") term)*
    term   := factor (("*" | "/") factor)*
    factor := "-" factor | power
    power  := atom ("^" uint)?
    atom   := number | ident "(" expr ")" | var | "(" expr ")"
    var    := "x" uint

Only ``x1 .. xn`` and the functions ``exp sin cos sqrt log`` are recognized.
Parsed trees are immutable and can be evaluated on floats, on numpy arrays
(one array per coordinate) and on :class:`~stphase.jet.Jet` values.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import (
    EvalError,
    ExprSyntaxError,
    UnknownIdentifier,
    VarOutOfRange,
)
from .jet import ELEMENTARY, Jet, jet_compose_elementary


@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    index: int  # 1-based


@dataclass(frozen=True)
class Add:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Sub:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Mul:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Div:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class PowInt:
    base: "Expr"
    exponent: int


@dataclass(frozen=True)
class Call:
    fn: str
    arg: "Expr"


Expr = Union[Const, Var, Add, Sub, Mul, Div, Neg, PowInt, Call]
EXPR_TYPES = (Const, Var, Add, Sub, Mul, Div, Neg, PowInt, Call)
_BINARY = {Add: "+", Sub: "-", Mul: "*", Div: "/"}


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^()]))"
)
_VAR = re.compile(r"x(\d+)\Z")


def _tokenize(source: str):
    tokens = []
    pos = 0
    while True:
        while pos < len(source) and source[pos].isspace():
            pos += 1
        if pos >= len(source):
            break
        m = _TOKEN.match(source, pos)
        if m is None or m.end() == pos:
            raise ExprSyntaxError(
                f"unexpected character {source[pos]!r}", _byte_offset(source, pos)
            )
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), _byte_offset(source, start)))
        pos = m.end()
    tokens.append(("end", "", _byte_offset(source, len(source))))
    return tokens


def _byte_offset(source: str, char_pos: int) -> int:
    return len(source[:char_pos].encode("utf-8"))


class _Parser:
    def __init__(self, source: str, dim: int):
        self.tokens = _tokenize(source)
        self.pos = 0
        self.dim = dim

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, text: str):
        kind, value, offset = self.take()
        if value != text or kind != "op":
            raise ExprSyntaxError(f"expected {text!r}, found {value or 'end of input'!r}", offset)

    def parse(self) -> Expr:
        e = self.expr()
        kind, value, offset = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected token {value!r}", offset)
        return e

    def expr(self) -> Expr:
        left = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            right = self.term()
            left = Add(left, right) if op == "+" else Sub(left, right)
        return left

    def term(self) -> Expr:
        left = self.factor()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            right = self.factor()
            left = Mul(left, right) if op == "*" else Div(left, right)
        return left

    def factor(self) -> Expr:
        kind, value, _ = self.peek()
        if kind == "op" and value == "-":
            self.take()
            return Neg(self.factor())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        kind, value, _ = self.peek()
        if kind == "op" and value == "^":
            self.take()
            kind, value, offset = self.take()
            if kind != "number" or not value.isdigit():
                raise ExprSyntaxError("exponent must be a non-negative integer literal", offset)
            return PowInt(base, int(value))
        return base

    def atom(self) -> Expr:
        kind, value, offset = self.take()
        if kind == "number":
            return Const(float(value))
        if kind == "op" and value == "(":
            e = self.expr()
            self.expect(")")
            return e
        if kind == "ident":
            m = _VAR.match(value)
            if m:
                index = int(m.group(1))
                if not 1 <= index <= self.dim:
                    raise VarOutOfRange(
                        f"variable {value} outside x1..x{self.dim}", offset
                    )
                return Var(index)
            if value in ELEMENTARY:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(value, arg)
            raise UnknownIdentifier(f"unknown identifier {value!r}", offset)
        raise ExprSyntaxError(f"unexpected {value or 'end of input'!r}", offset)


def parse(source: str, dim: int) -> Expr:
    """Parse ``source`` into an expression tree over ``x1 .. x{dim}``.

    >>> parse("cos(x1)-1", 1)
    Sub(left=Call(fn='cos', arg=Var(index=1)), right=Const(value=1.0))
    """
    if dim < 1:
        raise ValueError("dimension must be positive")
    return _Parser(source, dim).parse()


# ---------------------------------------------------------------------------
# printing
# ---------------------------------------------------------------------------

def to_source(e: Expr) -> str:
    """Render an expression as text that parses back to the same tree.

    Composite operands are always parenthesized, so no precedence reasoning
    is needed on the way back in.
    """
    if isinstance(e, Const):
        if not np.isfinite(e.value) or e.value < 0:
            raise ValueError(f"constant {e.value!r} has no literal form")
        return repr(float(e.value))
    if isinstance(e, Var):
        return f"x{e.index}"
    if isinstance(e, Neg):
        return f"(-{_wrap(e.operand)})"
    if isinstance(e, PowInt):
        return f"{_wrap(e.base)}^{e.exponent}"
    if isinstance(e, Call):
        return f"{e.fn}({to_source(e.arg)})"
    op = _BINARY[type(e)]
    return f"({_wrap(e.left)} {op} {_wrap(e.right)})"


def _wrap(e: Expr) -> str:
    s = to_source(e)
    # binary nodes and Neg already carry their own parentheses
    return f"({s})" if isinstance(e, PowInt) else s


def max_var_index(e: Expr) -> int:
    if isinstance(e, Const):
        return 0
    if isinstance(e, Var):
        return e.index
    if isinstance(e, (Neg,)):
        return max_var_index(e.operand)
    if isinstance(e, PowInt):
        return max_var_index(e.base)
    if isinstance(e, Call):
        return max_var_index(e.arg)
    return max(max_var_index(e.left), max_var_index(e.right))


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

_NUMPY_FN = {"exp": np.exp, "sin": np.sin, "cos": np.cos, "sqrt": np.sqrt, "log": np.log}


def evaluate(e: Expr, x: Sequence):
    """Evaluate on a point or on a grid.

    ``x[i]`` is the value of ``x{i+1}``; entries may be floats or equally
    shaped numpy arrays.  Raises :class:`EvalError` on division by zero,
    ``log`` of a non-positive value or ``sqrt`` of a negative value.
    """
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        if e.index > len(x):
            raise EvalError(f"x{e.index} not provided (point has length {len(x)})")
        return x[e.index - 1]
    if isinstance(e, Neg):
        return -evaluate(e.operand, x)
    if isinstance(e, PowInt):
        base = evaluate(e.base, x)
        out = np.ones_like(base) if isinstance(base, np.ndarray) else 1.0
        for _ in range(e.exponent):
            out = out * base
        return out
    if isinstance(e, Call):
        arg = evaluate(e.arg, x)
        if e.fn == "log" and np.any(np.asarray(arg) <= 0):
            raise EvalError(f"log of non-positive value in {to_source_safe(e)}")
        if e.fn == "sqrt" and np.any(np.asarray(arg) < 0):
            raise EvalError(f"sqrt of negative value in {to_source_safe(e)}")
        return _NUMPY_FN[e.fn](arg)
    left = evaluate(e.left, x)
    right = evaluate(e.right, x)
    if isinstance(e, Add):
        return left + right
    if isinstance(e, Sub):
        return left - right
    if isinstance(e, Mul):
        return left * right
    if np.any(np.asarray(right) == 0):
        raise EvalError(f"division by zero in {to_source_safe(e)}")
    return left / right


def to_source_safe(e: Expr) -> str:
    try:
        return to_source(e)
    except ValueError:
        return repr(e)


def eval_scalar(e: Expr, x: Sequence[float]) -> float:
    """Value of ``e`` at the point ``x``."""
    x = [float(v) for v in np.atleast_1d(np.asarray(x, dtype=float))]
    return float(evaluate(e, x))


def eval_jet(e: Expr, center: Sequence[float], order: int) -> Jet:
    """Degree-``order`` Taylor polynomial of ``e`` about ``center``."""
    center = tuple(float(c) for c in np.atleast_1d(center))
    n = len(center)

    def rec(node):
        if isinstance(node, Const):
            return Jet.constant(node.value, order, center)
        if isinstance(node, Var):
            if node.index > n:
                raise EvalError(f"x{node.index} outside a {n}-dimensional center")
            return Jet.variable(node.index - 1, order, center)
        if isinstance(node, Neg):
            return -rec(node.operand)
        if isinstance(node, PowInt):
            return rec(node.base) ** node.exponent
        if isinstance(node, Call):
            return jet_compose_elementary(node.fn, rec(node.arg))
        left, right = rec(node.left), rec(node.right)
        if isinstance(node, Add):
            return left + right
        if isinstance(node, Sub):
            return left - right
        if isinstance(node, Mul):
            return left * right
        return left / right

    return rec(e)
