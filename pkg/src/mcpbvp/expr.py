"""Recursive-descent parser for problem-file expressions.

Grammar::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("+" | "-") unary | power
    power  := atom ("^" unary)?            # right-associative, binds tighter than unary minus
    atom   := NUMBER | NAME | NAME "(" expr ")" | "(" expr ")"

Names are the caller's variables plus the constants ``pi`` and ``e``;
functions are ``sin cos exp ln``. The result is a callable evaluating the
expression elementwise on numpy arrays.
"""

from __future__ import annotations

import math
import operator
import re
from collections.abc import Callable, Iterable

import numpy as np

from .errors import BvpError

__all__ = ["Expression", "ExpressionError", "parse_expression"]

FUNCTIONS = {"sin": np.sin, "cos": np.cos, "exp": np.exp, "ln": np.log}
CONSTANTS = {"pi": math.pi, "e": math.e}
_BINOPS = {"+": operator.add, "-": operator.sub, "*": operator.mul, "/": operator.truediv}

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^()]))"
)


class ExpressionError(BvpError):
    def __init__(self, message: str, text: str, column: int):
        super().__init__(f"{message} at column {column}: {text!r}")
        self.text = text
        self.column = column


def _tokenize(text: str):
    pos, out = 0, []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            col = pos + len(text[pos:]) - len(text[pos:].lstrip()) + 1
            raise ExpressionError(f"unexpected character {text[col - 1]!r}", text, col)
        kind = m.lastgroup
        col = m.start(kind) + 1
        out.append((kind, m.group(kind), col))
        pos = m.end()
    out.append(("end", "", len(text) + 1))
    return out


def _binary(op, a, b):
    return lambda env: op(a(env), b(env))


class _Parser:
    def __init__(self, text: str, variables: frozenset[str]):
        self.text = text
        self.variables = variables
        self.tokens = _tokenize(text)
        self.i = 0
        self.names: set[str] = set()

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ExpressionError(msg, self.text, tok[2])

    def expect(self, op):
        tok = self.take()
        if tok[:2] != ("op", op):
            self.error(f"expected {op!r}", tok)

    def parse(self):
        node = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected {self.peek()[1]!r}")
        return node

    def expr(self):
        node = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = _BINOPS[self.take()[1]]
            node = _binary(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[:2] in (("op", "*"), ("op", "/")):
            op = _BINOPS[self.take()[1]]
            node = _binary(op, node, self.unary())
        return node

    def unary(self):
        tok = self.peek()
        if tok[:2] == ("op", "-"):
            self.take()
            inner = self.unary()
            return lambda env: -inner(env)
        if tok[:2] == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            exponent = self.unary()
            return lambda env: np.power(base(env), exponent(env))
        return base

    def atom(self):
        tok = self.take()
        kind, val, _ = tok
        if kind == "num":
            c = float(val)
            return lambda env: c
        if kind == "name":
            if self.peek()[:2] == ("op", "("):
                if val not in FUNCTIONS:
                    self.error(f"unknown function {val!r}", tok)
                self.take()
                arg = self.expr()
                self.expect(")")
                fn = FUNCTIONS[val]
                return lambda env: fn(arg(env))
            if val in self.variables:
                self.names.add(val)
                return lambda env: env[val]
            if val in CONSTANTS:
                c = CONSTANTS[val]
                return lambda env: c
            if val in FUNCTIONS:
                self.error(f"function {val!r} needs an argument", tok)
            self.error(f"unknown name {val!r}", tok)
        if (kind, val) == ("op", "("):
            node = self.expr()
            self.expect(")")
            return node
        if kind == "end":
            self.error("unexpected end of expression", tok)
        self.error(f"unexpected {val!r}", tok)


class Expression:
    """A parsed expression; call with keyword arrays for its variables."""

    def __init__(self, text: str, variables: Iterable[str] = ("z",)):
        self.text = text
        self.variables = frozenset(variables)
        parser = _Parser(text, self.variables)
        self._fn: Callable = parser.parse()
        self.names = frozenset(parser.names)

    def __call__(self, **env):
        missing = self.names - env.keys()
        if missing:
            raise BvpError(f"expression {self.text!r} needs values for {sorted(missing)}")
        shape = np.broadcast_shapes(*(np.shape(v) for v in env.values())) if env else ()
        with np.errstate(all="ignore"):
            out = self._fn({k: np.asarray(v, dtype=float) for k, v in env.items()})
        return np.array(np.broadcast_to(np.asarray(out, dtype=float), shape))[()]

    def constant(self) -> float:
        if self.names:
            raise BvpError(f"expression {self.text!r} is not constant (uses {sorted(self.names)})")
        return float(self())

    def __repr__(self):
        return f"Expression({self.text!r})"


def parse_expression(text: str, variables: Iterable[str] = ("z",)) -> Expression:
    if not isinstance(text, str):
        raise BvpError(f"expression must be a string, got {type(text).__name__}")
    return Expression(text, variables)
