"""Parser, evaluator, and symbolic differentiator for function expressions.

The mini-language describes the one-variable functions fed to the
integral and derivative engines: arithmetic over the variable ``t``,
numeric literals, and a small set of named functions.  Grammar::

    expr    = term { ("+" | "-") term } ;
    term    = unary { ("*" | "/") unary } ;
    unary   = "-" unary | power ;
    power   = atom [ "^" unary ] ;
    atom    = NUMBER | "t" | FUNC "(" expr ")" | "(" expr ")" ;
    NUMBER  = digits [ "." digits ] [ ("e" | "E") [sign] digits ]
            | "." digits [ ("e" | "E") [sign] digits ] ;
    FUNC    = "sin" | "cos" | "exp" | "ln" | "sqrt" | "abs" | "sign" ;

``^`` is right associative and binds tighter than unary minus, so
``-t^2`` is ``-(t^2)`` and ``2^-3`` parses.  Expressions are immutable
trees; :func:`parse`, :func:`evaluate`, :func:`differentiate`, and
:func:`to_source` are the public entry points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import (
    EvalDomainError,
    NonDifferentiableError,
    ParseError,
    UnknownIdentifierError,
)

__all__ = [
    "Token",
    "Const",
    "Var",
    "Neg",
    "BinOp",
    "Call",
    "Expr",
    "FUNCTION_NAMES",
    "tokenize",
    "parse",
    "evaluate",
    "evaluate_array",
    "differentiate",
    "to_source",
]


# --------------------------------------------------------------------------
# tokens

_TOKEN_KINDS = ("number", "identifier", "operator", "lparen", "rparen")


@dataclass(frozen=True)
class Token:
    """One lexeme of an expression source string."""

    kind: str
    lexeme: str
    position: int


def tokenize(source: str) -> list[Token]:
    """Split *source* into tokens, skipping whitespace.

    Raises :class:`ParseError` on any character outside the language.
    """
    tokens: list[Token] = []
    i = 0
    n = len(source)
    while i < n:
        ch = source[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and source[i + 1].isdigit()):
            j = i
            while j < n and source[j].isdigit():
                j += 1
            if j < n and source[j] == ".":
                j += 1
                while j < n and source[j].isdigit():
                    j += 1
            if j < n and source[j] in "eE":
                k = j + 1
                if k < n and source[k] in "+-":
                    k += 1
                if k < n and source[k].isdigit():
                    j = k
                    while j < n and source[j].isdigit():
                        j += 1
            tokens.append(Token("number", source[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            tokens.append(Token("identifier", source[i:j], i))
            i = j
            continue
        if ch in "+-*/^":
            tokens.append(Token("operator", ch, i))
            i += 1
            continue
        if ch == "(":
            tokens.append(Token("lparen", ch, i))
            i += 1
            continue
        if ch == ")":
            tokens.append(Token("rparen", ch, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    return tokens


# --------------------------------------------------------------------------
# syntax tree


@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    """The free variable ``t``."""


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Expr"


Expr = Union[Const, Var, Neg, BinOp, Call]

FUNCTION_NAMES = ("sin", "cos", "exp", "ln", "sqrt", "abs", "sign")


# --------------------------------------------------------------------------
# parser (precedence climbing)

_BINARY_PRECEDENCE = {"+": 10, "-": 10, "*": 20, "/": 20, "^": 40}
_UNARY_PRECEDENCE = 30
_RIGHT_ASSOC = {"^"}


class _Parser:
    def __init__(self, source: str) -> None:
        self.source = source
        self.tokens = tokenize(source)
        self.pos = 0

    def peek(self) -> Token | None:
        if self.pos < len(self.tokens):
            return self.tokens[self.pos]
        return None

    def advance(self) -> Token:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of expression", len(self.source))
        self.pos += 1
        return tok

    def expect(self, kind: str, what: str) -> Token:
        tok = self.peek()
        if tok is None:
            raise ParseError(f"expected {what}", len(self.source))
        if tok.kind != kind:
            raise ParseError(f"expected {what}, found {tok.lexeme!r}", tok.position)
        return self.advance()

    def parse(self) -> Expr:
        node = self.parse_expr(0)
        tok = self.peek()
        if tok is not None:
            raise ParseError(f"unexpected {tok.lexeme!r}", tok.position)
        return node

    def parse_expr(self, min_prec: int) -> Expr:
        node = self.parse_prefix()
        while True:
            tok = self.peek()
            if tok is None or tok.kind != "operator":
                break
            prec = _BINARY_PRECEDENCE[tok.lexeme]
            if prec < min_prec:
                break
            self.advance()
            next_min = prec if tok.lexeme in _RIGHT_ASSOC else prec + 1
            right = self.parse_expr(next_min)
            node = BinOp(tok.lexeme, node, right)
        return node

    def parse_prefix(self) -> Expr:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of expression", len(self.source))
        if tok.kind == "operator" and tok.lexeme == "-":
            self.advance()
            return Neg(self.parse_expr(_UNARY_PRECEDENCE))
        return self.parse_atom()

    def parse_atom(self) -> Expr:
        tok = self.advance()
        if tok.kind == "number":
            return Const(float(tok.lexeme))
        if tok.kind == "identifier":
            if tok.lexeme == "t":
                return Var()
            if tok.lexeme in FUNCTION_NAMES:
                self.expect("lparen", "'(' after function name")
                arg = self.parse_expr(0)
                self.expect("rparen", "')'")
                return Call(tok.lexeme, arg)
            raise UnknownIdentifierError(
                f"unknown identifier {tok.lexeme!r}", tok.position
            )
        if tok.kind == "lparen":
            node = self.parse_expr(0)
            self.expect("rparen", "')'")
            return node
        raise ParseError(f"unexpected {tok.lexeme!r}", tok.position)


def parse(source: str) -> Expr:
    """Parse *source* into an expression tree.

    Raises :class:`ParseError` for malformed input and
    :class:`UnknownIdentifierError` for names outside the language; both
    carry the 0-based source position.
    """
    if not source or not source.strip():
        raise ParseError("empty expression", 0)
    return _Parser(source).parse()


# --------------------------------------------------------------------------
# evaluation


def _scalar_sign(x: float) -> float:
    if x > 0.0:
        return 1.0
    if x < 0.0:
        return -1.0
    return 0.0


_SCALAR_FUNCS: dict[str, Callable[[float], float]] = {
    "sin": math.sin,
    "cos": math.cos,
    "exp": math.exp,
    "ln": math.log,
    "sqrt": math.sqrt,
    "abs": abs,
    "sign": _scalar_sign,
}

_ARRAY_FUNCS: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "sin": np.sin,
    "cos": np.cos,
    "exp": np.exp,
    "ln": np.log,
    "sqrt": np.sqrt,
    "abs": np.abs,
    "sign": np.sign,
}


def evaluate(expr: Expr, t: float) -> float:
    """Evaluate *expr* at the point *t*.

    Raises :class:`EvalDomainError` when the value is undefined or
    non-finite there (log of a non-positive number, division by zero,
    overflow, ...).
    """
    try:
        value = _eval_scalar(expr, t)
    except (ValueError, OverflowError, ZeroDivisionError) as exc:
        raise EvalDomainError(str(exc), coordinate=t) from exc
    if not math.isfinite(value):
        raise EvalDomainError("expression value is not finite", coordinate=t)
    return value


def _eval_scalar(expr: Expr, t: float) -> float:
    if isinstance(expr, Const):
        return expr.value
    if isinstance(expr, Var):
        return t
    if isinstance(expr, Neg):
        return -_eval_scalar(expr.operand, t)
    if isinstance(expr, BinOp):
        left = _eval_scalar(expr.left, t)
        right = _eval_scalar(expr.right, t)
        if expr.op == "+":
            return left + right
        if expr.op == "-":
            return left - right
        if expr.op == "*":
            return left * right
        if expr.op == "/":
            return left / right
        return math.pow(left, right)
    if isinstance(expr, Call):
        return _SCALAR_FUNCS[expr.func](_eval_scalar(expr.arg, t))
    raise TypeError(f"not an expression node: {expr!r}")


def evaluate_array(expr: Expr, ts: np.ndarray, check: bool = True) -> np.ndarray:
    """Evaluate *expr* elementwise over the array *ts*.

    With ``check=True`` any non-finite result raises
    :class:`EvalDomainError` naming the first offending coordinate; with
    ``check=False`` NaN/inf values pass through so callers can apply
    their own endpoint handling.
    """
    ts = np.asarray(ts, dtype=float)
    with np.errstate(all="ignore"):
        values = _eval_array(expr, ts)
    if check:
        bad = ~np.isfinite(values)
        if bad.any():
            where = float(ts[np.flatnonzero(bad)[0]])
            raise EvalDomainError(
                "expression value is not finite", coordinate=where
            )
    return values


def _eval_array(expr: Expr, ts: np.ndarray) -> np.ndarray:
    if isinstance(expr, Const):
        return np.full(ts.shape, expr.value)
    if isinstance(expr, Var):
        return np.array(ts, copy=True)
    if isinstance(expr, Neg):
        return -_eval_array(expr.operand, ts)
    if isinstance(expr, BinOp):
        left = _eval_array(expr.left, ts)
        right = _eval_array(expr.right, ts)
        if expr.op == "+":
            return left + right
        if expr.op == "-":
            return left - right
        if expr.op == "*":
            return left * right
        if expr.op == "/":
            return left / right
        return np.power(left, right)
    if isinstance(expr, Call):
        return _ARRAY_FUNCS[expr.func](_eval_array(expr.arg, ts))
    raise TypeError(f"not an expression node: {expr!r}")


# --------------------------------------------------------------------------
# differentiation

_ZERO = Const(0.0)
_ONE = Const(1.0)


def _is_const(expr: Expr, value: float | None = None) -> bool:
    if not isinstance(expr, Const):
        return False
    return value is None or expr.value == value


def _fold(expr: Expr) -> Expr:
    # collapse constant subtrees when they evaluate cleanly
    try:
        return Const(evaluate(expr, 0.0))
    except EvalDomainError:
        return expr


def _neg(operand: Expr) -> Expr:
    if isinstance(operand, Const):
        return Const(-operand.value)
    if isinstance(operand, Neg):
        return operand.operand
    return Neg(operand)


def _add(left: Expr, right: Expr) -> Expr:
    if _is_const(left, 0.0):
        return right
    if _is_const(right, 0.0):
        return left
    if isinstance(left, Const) and isinstance(right, Const):
        return Const(left.value + right.value)
    return BinOp("+", left, right)


def _sub(left: Expr, right: Expr) -> Expr:
    if _is_const(right, 0.0):
        return left
    if _is_const(left, 0.0):
        return _neg(right)
    if isinstance(left, Const) and isinstance(right, Const):
        return Const(left.value - right.value)
    return BinOp("-", left, right)


def _mul(left: Expr, right: Expr) -> Expr:
    if _is_const(left, 0.0) or _is_const(right, 0.0):
        return _ZERO
    if _is_const(left, 1.0):
        return right
    if _is_const(right, 1.0):
        return left
    if isinstance(left, Const) and isinstance(right, Const):
        return Const(left.value * right.value)
    return BinOp("*", left, right)


def _div(left: Expr, right: Expr) -> Expr:
    if _is_const(right, 1.0):
        return left
    node = BinOp("/", left, right)
    if isinstance(left, Const) and isinstance(right, Const):
        return _fold(node)
    return node


def _pow(base: Expr, exponent: Expr) -> Expr:
    if _is_const(exponent, 1.0):
        return base
    if _is_const(exponent, 0.0):
        return _ONE
    node = BinOp("^", base, exponent)
    if isinstance(base, Const) and isinstance(exponent, Const):
        return _fold(node)
    return node


def differentiate(expr: Expr) -> Expr:
    """Return d(expr)/dt as a new expression tree.

    Raises :class:`NonDifferentiableError` for ``abs`` and ``sign``,
    and for a power ``u^v`` where both sides depend on ``t`` combined
    with a possibly non-positive base (the general rule needs
    ``ln(u)``); the supported special cases ``u^c`` and ``c^v`` cover
    everything the operators need.
    """
    if isinstance(expr, Const):
        return _ZERO
    if isinstance(expr, Var):
        return _ONE
    if isinstance(expr, Neg):
        return _neg(differentiate(expr.operand))
    if isinstance(expr, BinOp):
        return _diff_binop(expr)
    if isinstance(expr, Call):
        return _diff_call(expr)
    raise TypeError(f"not an expression node: {expr!r}")


def _literal_value(expr: Expr) -> float | None:
    """Constant value of a literal, looking through one sign flip."""
    if isinstance(expr, Const):
        return expr.value
    if isinstance(expr, Neg) and isinstance(expr.operand, Const):
        return -expr.operand.value
    return None


def _diff_binop(expr: BinOp) -> Expr:
    du = differentiate(expr.left)
    dv = differentiate(expr.right)
    u, v = expr.left, expr.right
    if expr.op == "+":
        return _add(du, dv)
    if expr.op == "-":
        return _sub(du, dv)
    if expr.op == "*":
        return _add(_mul(du, v), _mul(u, dv))
    if expr.op == "/":
        numer = _sub(_mul(du, v), _mul(u, dv))
        return _div(numer, _pow(v, Const(2.0)))
    # power: u^c, c^v, and the full u^v via exp(v ln u)
    if isinstance(v, Const):
        scaled = _mul(v, _pow(u, Const(v.value - 1.0)))
        return _mul(scaled, du)
    base = _literal_value(u)
    if base is not None:
        if base <= 0.0:
            raise NonDifferentiableError(
                f"cannot differentiate {base!r}^v for non-positive base"
            )
        return _mul(_mul(Const(math.log(base)), expr), dv)
    inner = _add(_mul(dv, Call("ln", u)), _div(_mul(v, du), u))
    return _mul(expr, inner)


def _diff_call(expr: Call) -> Expr:
    inner = differentiate(expr.arg)
    u = expr.arg
    if expr.func == "sin":
        outer: Expr = Call("cos", u)
    elif expr.func == "cos":
        outer = _neg(Call("sin", u))
    elif expr.func == "exp":
        outer = expr
    elif expr.func == "ln":
        return _div(inner, u)
    elif expr.func == "sqrt":
        return _div(inner, _mul(Const(2.0), expr))
    else:
        raise NonDifferentiableError(
            f"{expr.func} has no derivative in this language"
        )
    return _mul(outer, inner)


# --------------------------------------------------------------------------
# printing


def _precedence(expr: Expr) -> int:
    if isinstance(expr, BinOp):
        return _BINARY_PRECEDENCE[expr.op]
    if isinstance(expr, Neg):
        return _UNARY_PRECEDENCE
    return 100


def to_source(expr: Expr) -> str:
    """Render *expr* as a source string that parses back to the same tree.

    Guaranteed structural round-trip for trees whose constants are
    non-negative (negative values are written with unary minus, which
    reparses as ``Neg(Const(+c))``).
    """
    if isinstance(expr, Const):
        if expr.value < 0.0 or (expr.value == 0.0 and math.copysign(1.0, expr.value) < 0.0):
            return "-" + _format_const(-expr.value)
        return _format_const(expr.value)
    if isinstance(expr, Var):
        return "t"
    if isinstance(expr, Neg):
        return "-" + _wrap(expr.operand, _UNARY_PRECEDENCE)
    if isinstance(expr, BinOp):
        prec = _BINARY_PRECEDENCE[expr.op]
        if expr.op in _RIGHT_ASSOC:
            left = _wrap(expr.left, prec + 1)
            right = _wrap(expr.right, prec)
        else:
            left = _wrap(expr.left, prec)
            right = _wrap(expr.right, prec + 1)
        return f"{left} {expr.op} {right}"
    if isinstance(expr, Call):
        return f"{expr.func}({to_source(expr.arg)})"
    raise TypeError(f"not an expression node: {expr!r}")


def _wrap(expr: Expr, min_prec: int) -> str:
    text = to_source(expr)
    if _precedence(expr) < min_prec:
        return f"({text})"
    return text


def _format_const(value: float) -> str:
    text = repr(value)
    if text.endswith(".0"):
        return text[:-2]
    return text
