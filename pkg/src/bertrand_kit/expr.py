"""Scalar expressions of one variable ``t``.

Grammar (tightest first)::

    ^  (constant exponent, right-assoc)  >  unary -  >  * /  >  + -

with parentheses, function calls ``f(x)`` for f in sin, cos, tan, exp,
log, sqrt, numeric literals with optional exponent, and the single free
variable ``t``.  ASTs are immutable; ``to_text`` re-serializes to an
infix string that parses back to a structurally identical tree.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .errors import (
    ExprSyntaxError,
    NonConstantExponentError,
    UnknownFunctionError,
)

FUNCTIONS = ("sin", "cos", "tan", "exp", "log", "sqrt")


class ExprNode:
    """Base class for AST nodes."""

    __slots__ = ()


@dataclass(frozen=True)
class Const(ExprNode):
    value: float


@dataclass(frozen=True)
class Var(ExprNode):
    pass


@dataclass(frozen=True)
class Unary(ExprNode):
    op: str  # 'neg' or a function name
    child: ExprNode


@dataclass(frozen=True)
class Binary(ExprNode):
    op: str  # 'add' | 'sub' | 'mul' | 'div'
    left: ExprNode
    right: ExprNode


@dataclass(frozen=True)
class PowConst(ExprNode):
    base: ExprNode
    exponent: float


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>\^|\*|/|\+|-|\(|\)))"
)


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == m.start():
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            bad_at = len(text) - len(stripped)
            raise ExprSyntaxError(bad_at, ("number", "name", "operator"))
        if m.lastgroup == "num":
            tokens.append(("num", float(m.group("num")), m.start("num")))
        elif m.lastgroup == "name":
            tokens.append(("name", m.group("name"), m.start("name")))
        else:
            tokens.append(("op", m.group("op"), m.start("op")))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, val, pos = self.peek()
        if kind != "op" or val != op:
            raise ExprSyntaxError(pos, (op,))
        return self.advance()

    def parse(self):
        node = self.sum()
        kind, _, pos = self.peek()
        if kind != "end":
            raise ExprSyntaxError(pos, ("operator", "end of input"))
        return node

    def sum(self):
        node = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in ("+", "-"):
                self.advance()
                rhs = self.term()
                node = Binary("add" if val == "+" else "sub", node, rhs)
            else:
                return node

    def term(self):
        node = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in ("*", "/"):
                self.advance()
                rhs = self.factor()
                node = Binary("mul" if val == "*" else "div", node, rhs)
            else:
                return node

    def factor(self):
        # unary minus binds looser than ^
        kind, val, _ = self.peek()
        if kind == "op" and val == "-":
            self.advance()
            return Unary("neg", self.factor())
        if kind == "op" and val == "+":
            self.advance()
            return self.factor()
        return self.power()

    def power(self):
        base = self.atom()
        kind, val, pos = self.peek()
        if kind == "op" and val == "^":
            self.advance()
            # the exponent may itself carry a unary sign or a ^, but must
            # fold to a numeric constant
            exp_pos = self.peek()[2]
            exponent = self.factor()
            folded = constant_fold(exponent)
            if folded is None:
                raise NonConstantExponentError(exp_pos)
            return PowConst(base, folded)
        return base

    def atom(self):
        kind, val, pos = self.advance()
        if kind == "num":
            return Const(val)
        if kind == "name":
            if val == "t":
                return Var()
            nkind, nval, _ = self.peek()
            if nkind == "op" and nval == "(":
                if val not in FUNCTIONS:
                    raise UnknownFunctionError(val, pos)
                self.advance()
                arg = self.sum()
                self.expect_op(")")
                return Unary(val, arg)
            raise ExprSyntaxError(pos, ("t",) + FUNCTIONS)
        if kind == "op" and val == "(":
            node = self.sum()
            self.expect_op(")")
            return node
        raise ExprSyntaxError(pos, ("number", "name", "(", "-"))


def parse_expression(text: str) -> ExprNode:
    """Parse infix text into an AST.

    Raises ExprSyntaxError, UnknownFunctionError or
    NonConstantExponentError on malformed input.
    """
    if not text or not text.strip():
        raise ExprSyntaxError(0, ("expression",))
    return _Parser(text).parse()


def constant_fold(node: ExprNode):
    """Return the numeric value of a constant subtree, or None."""
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Var):
        return None
    if isinstance(node, Unary):
        v = constant_fold(node.child)
        if v is None:
            return None
        if node.op == "neg":
            return -v
        return getattr(math, node.op)(v)
    if isinstance(node, PowConst):
        v = constant_fold(node.base)
        return None if v is None else v**node.exponent
    v1 = constant_fold(node.left)
    v2 = constant_fold(node.right)
    if v1 is None or v2 is None:
        return None
    if node.op == "add":
        return v1 + v2
    if node.op == "sub":
        return v1 - v2
    if node.op == "mul":
        return v1 * v2
    return v1 / v2


_PREC = {"add": 1, "sub": 1, "mul": 2, "div": 2, "neg": 3, "pow": 4, "atom": 5}


def _prec(node):
    if isinstance(node, (Const, Var)):
        # negative literals print with a sign
        if isinstance(node, Const) and node.value < 0:
            return _PREC["neg"]
        return _PREC["atom"]
    if isinstance(node, PowConst):
        return _PREC["pow"]
    if isinstance(node, Unary):
        return _PREC["neg"] if node.op == "neg" else _PREC["atom"]
    return _PREC[node.op]


def _wrap(child, parent_prec, strict=False):
    text = to_text(child)
    p = _prec(child)
    if p < parent_prec or (strict and p == parent_prec):
        return f"({text})"
    return text


def to_text(node: ExprNode) -> str:
    """Canonical infix serialization; round-trips through the parser."""
    if isinstance(node, Const):
        return repr(node.value)
    if isinstance(node, Var):
        return "t"
    if isinstance(node, PowConst):
        base = _wrap(node.base, _PREC["pow"], strict=True)
        exp = repr(node.exponent)
        if node.exponent < 0:
            exp = f"({exp})"
        return f"{base}^{exp}"
    if isinstance(node, Unary):
        if node.op == "neg":
            return f"-{_wrap(node.child, _PREC['neg'], strict=True)}"
        return f"{node.op}({to_text(node.child)})"
    op = {"add": "+", "sub": "-", "mul": "*", "div": "/"}[node.op]
    p = _PREC[node.op]
    left = _wrap(node.left, p)
    right = _wrap(node.right, p, strict=node.op in ("sub", "div"))
    return f"{left} {op} {right}" if p == 1 else f"{left}{op}{right}"
