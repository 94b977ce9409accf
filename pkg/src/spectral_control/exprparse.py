"""Parser and evaluator for the scalar expressions that define b(x) in configs.

Grammar (whitespace-insensitive, no implicit multiplication):

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?          right-associative
    atom   := NUMBER | VARIABLE | NAME '(' args ')' | '(' expr ')'

Unary minus binds looser than '^', so ``-x^2`` is ``-(x^2)``. Variables are
``x`` (one dimension only) or ``x1``..``xd``. Numbers are decimal literals
with an optional exponent part. All errors carry the byte offset of the
offending token.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import EvalError, ParameterError, ParseError

FUNCTIONS = {"exp": 1, "log": 1, "sqrt": 1, "sin": 1, "cos": 1, "abs": 1, "pow": 2}

#: Integer exponents up to this magnitude are evaluated by repeated
#: multiplication; larger or fractional ones go through exp(y log x).
SMALL_INT_POWER = 64


@dataclass(frozen=True)
class Num:
    value: float
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Var:
    index: int
    pos: int = field(default=0, compare=False)
    name: str | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Neg:
    operand: "Ast"
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Ast"
    right: "Ast"
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Call:
    func: str
    args: tuple["Ast", ...]
    pos: int = field(default=0, compare=False)


Ast = Union[Num, Var, Neg, BinOp, Call]

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^(),]))"
)


def _tokenize(source: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(source):
        match = _TOKEN_RE.match(source, pos)
        if match is None:
            stripped = source[pos:].lstrip()
            at = len(source) - len(stripped)
            raise ParseError(f"unexpected character {source[at]!r}", at)
        if match.lastgroup == "num":
            tokens.append(("num", match.group("num"), match.start("num")))
        elif match.lastgroup == "ident":
            tokens.append(("ident", match.group("ident"), match.start("ident")))
        else:
            tokens.append(("op", match.group("op"), match.start("op")))
        pos = match.end()
    tokens.append(("end", "", len(source)))
    return tokens


class _Parser:
    def __init__(self, source: str, d: int):
        self.source = source
        self.d = d
        self.tokens = _tokenize(source)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, text, pos = self.peek()
        if kind != "op" or text != op:
            raise ParseError(f"expected {op!r}", pos)
        return self.next()

    def at_op(self, *ops) -> bool:
        kind, text, _ = self.peek()
        return kind == "op" and text in ops

    def parse(self) -> Ast:
        node = self.expr()
        kind, text, pos = self.peek()
        if kind != "end":
            raise ParseError(f"trailing input starting with {text!r}", pos)
        return node

    def expr(self) -> Ast:
        node = self.term()
        while self.at_op("+", "-"):
            _, op, pos = self.next()
            node = BinOp(op, node, self.term(), pos)
        return node

    def term(self) -> Ast:
        node = self.unary()
        while self.at_op("*", "/"):
            _, op, pos = self.next()
            node = BinOp(op, node, self.unary(), pos)
        return node

    def unary(self) -> Ast:
        if self.at_op("-"):
            _, _, pos = self.next()
            return Neg(self.unary(), pos)
        return self.power()

    def power(self) -> Ast:
        node = self.atom()
        if self.at_op("^"):
            _, _, pos = self.next()
            node = BinOp("^", node, self.unary(), pos)
        return node

    def atom(self) -> Ast:
        kind, text, pos = self.peek()
        if kind == "num":
            self.next()
            return Num(float(text), pos)
        if kind == "ident":
            self.next()
            if self.at_op("("):
                return self.call(text, pos)
            return self.variable(text, pos)
        if kind == "op" and text == "(":
            self.next()
            node = self.expr()
            self.expect_op(")")
            return node
        raise ParseError(f"expected a number, variable, or '('", pos)

    def variable(self, name: str, pos: int) -> Var:
        if name == "x":
            if self.d != 1:
                raise ParseError(
                    f"unknown identifier 'x': use x1..x{self.d} in {self.d} dimensions", pos
                )
            return Var(0, pos, name)
        match = re.fullmatch(r"x([1-9][0-9]*)", name)
        if match:
            index = int(match.group(1))
            if index > self.d:
                raise ParseError(
                    f"unknown identifier {name!r}: only x1..x{self.d} are defined", pos
                )
            return Var(index - 1, pos, name)
        raise ParseError(f"unknown identifier {name!r}", pos)

    def call(self, name: str, pos: int) -> Call:
        if name not in FUNCTIONS:
            raise ParseError(f"unknown function {name!r}", pos)
        self.expect_op("(")
        args: list[Ast] = []
        if not self.at_op(")"):
            args.append(self.expr())
            while self.at_op(","):
                self.next()
                args.append(self.expr())
        _, _, close_pos = self.peek()
        arity = FUNCTIONS[name]
        if len(args) != arity:
            raise ParseError(
                f"{name} expects {arity} argument(s), got {len(args)}", close_pos
            )
        self.expect_op(")")
        return Call(name, tuple(args), pos)


def parse(source: str, d: int) -> Ast:
    """Parse an expression over d coordinates."""
    if d < 1:
        raise ParameterError(f"dimension must be at least 1, got {d}")
    return _Parser(source, d).parse()


# Precedence ranks for the canonical printer.
_PREC_ADD, _PREC_MUL, _PREC_NEG, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4, 5


def _prec(node: Ast) -> int:
    if isinstance(node, BinOp):
        return {"+": _PREC_ADD, "-": _PREC_ADD, "*": _PREC_MUL, "/": _PREC_MUL, "^": _PREC_POW}[
            node.op
        ]
    if isinstance(node, Neg):
        return _PREC_NEG
    return _PREC_ATOM


def _wrap(text: str, needed: bool) -> str:
    return f"({text})" if needed else text


def to_source(node: Ast) -> str:
    """Canonical printed form; reparsing it gives a structurally equal tree."""
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Var):
        return node.name if node.name is not None else f"x{node.index + 1}"
    if isinstance(node, Neg):
        inner = to_source(node.operand)
        return "-" + _wrap(inner, _prec(node.operand) < _PREC_NEG)
    if isinstance(node, Call):
        return f"{node.func}({', '.join(to_source(a) for a in node.args)})"
    left, right = to_source(node.left), to_source(node.right)
    if node.op in "+-":
        return f"{_wrap(left, _prec(node.left) < _PREC_ADD)} {node.op} " + _wrap(
            right, _prec(node.right) <= _PREC_ADD
        )
    if node.op in "*/":
        return f"{_wrap(left, _prec(node.left) < _PREC_MUL)} {node.op} " + _wrap(
            right, _prec(node.right) <= _PREC_MUL
        )
    # '^': the left slot only admits atoms; the right slot admits unary.
    return _wrap(left, _prec(node.left) < _PREC_ATOM) + "^" + _wrap(
        right, _prec(node.right) < _PREC_NEG
    )


def _power(base, expo, pos: int):
    expo_arr = np.asarray(expo)
    is_small_int = (
        expo_arr.ndim == 0
        and np.isfinite(expo_arr)
        and float(expo_arr) == int(expo_arr)
        and abs(float(expo_arr)) <= SMALL_INT_POWER
    )
    if is_small_int:
        n = int(expo_arr)
        if n < 0 and np.any(np.asarray(base) == 0.0):
            raise EvalError("zero raised to a negative power", pos)
        result = np.ones_like(np.asarray(base, dtype=float))
        square = np.asarray(base, dtype=float)
        k = abs(n)
        while k:
            if k & 1:
                result = result * square
            k >>= 1
            if k:
                square = square * square
        return result if n >= 0 else 1.0 / result
    if np.any(np.asarray(base) <= 0.0):
        raise EvalError("non-integer power of a non-positive base", pos)
    return np.exp(np.asarray(expo, dtype=float) * np.log(base))


def _ev(node: Ast, point: tuple):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        if node.index >= len(point):
            raise EvalError(
                f"variable x{node.index + 1} needs a point with at least "
                f"{node.index + 1} coordinates, got {len(point)}",
                node.pos,
            )
        return point[node.index]
    if isinstance(node, Neg):
        return -_ev(node.operand, point)
    if isinstance(node, Call):
        args = [_ev(a, point) for a in node.args]
        if node.func == "exp":
            return np.exp(args[0])
        if node.func == "log":
            if np.any(np.asarray(args[0]) <= 0.0):
                raise EvalError("log of a non-positive value", node.pos)
            return np.log(args[0])
        if node.func == "sqrt":
            if np.any(np.asarray(args[0]) < 0.0):
                raise EvalError("sqrt of a negative value", node.pos)
            return np.sqrt(args[0])
        if node.func == "sin":
            return np.sin(args[0])
        if node.func == "cos":
            return np.cos(args[0])
        if node.func == "abs":
            return np.abs(args[0])
        return _power(args[0], args[1], node.pos)
    left = _ev(node.left, point)
    right = _ev(node.right, point)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    if node.op == "*":
        return left * right
    if node.op == "/":
        if np.any(np.asarray(right) == 0.0):
            raise EvalError("division by zero", node.pos)
        return left / right
    return _power(left, right, node.pos)


def evaluate(ast: Ast, point):
    """Evaluate at a point (sequence of coordinates; scalars or arrays)."""
    point = tuple(point)
    result = _ev(ast, point)
    if all(np.ndim(v) == 0 for v in point):
        return float(result)
    return np.asarray(result, dtype=float)


def as_function(ast: Ast):
    """Wrap an AST as a positional-argument callable b(x1, ..., xd)."""

    def b(*coords):
        return evaluate(ast, coords)

    return b
