"""Expression language for d(E), K(E, Ep) and rho profiles.

Grammar: complex literals (``2``, ``1.5e-3``, ``0.5i``), the constants ``pi``
and ``i``, the variables ``E`` and ``Ep`` (Ep stands for E'), unary minus,
binary ``+ - * / ^`` and calls to exp, sin, cos, sqrt and abs. ``^`` binds
tightest and is right-associative, then unary minus, then ``* /``, then ``+ -``.
Parsing is top-down operator precedence (Pratt).
"""

import re
from collections.abc import Iterator
from dataclasses import dataclass

import numpy as np

from commutclass.errors import (
    ArityError,
    ExprEvaluationError,
    ExprSyntaxError,
    UnknownIdentifierError,
)

VARIABLES = ("E", "Ep")
CONSTANTS = {"pi": complex(np.pi), "i": 1j}
FUNCTIONS = {
    "exp": np.exp,
    "sin": np.sin,
    "cos": np.cos,
    "sqrt": np.sqrt,
    "abs": np.abs,
}
FUNCTION_ARITY = dict.fromkeys(FUNCTIONS, 1)

# Binding powers
_ADDITIVE = 10
_MULTIPLICATIVE = 20
_UNARY = 25
_POWER = 30
_INFIX_BINDING = {"+": _ADDITIVE, "-": _ADDITIVE, "*": _MULTIPLICATIVE, "/": _MULTIPLICATIVE, "^": _POWER}


@dataclass(frozen=True)
class Number:
    value: complex


@dataclass(frozen=True)
class Constant:
    name: str


@dataclass(frozen=True)
class Variable:
    name: str


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
    args: tuple["Expr", ...]


Expr = Number | Constant | Variable | Neg | BinOp | Call


@dataclass(frozen=True)
class _Token:
    kind: str  # number, imag, ident, op, lparen, rparen, comma, end
    text: str
    offset: int  # byte offset into the UTF-8 source
    value: float = 0.0


_TOKEN_PATTERN = re.compile(
    r"""
    (?P<space>\s+)
    | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)(?P<imag>i(?![A-Za-z0-9_]))?
    | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
    | (?P<op>[-+*/^])
    | (?P<lparen>\()
    | (?P<rparen>\))
    | (?P<comma>,)
    """,
    re.VERBOSE,
)


def _tokenize(text: str) -> Iterator[_Token]:
    position = 0
    while position < len(text):
        match = _TOKEN_PATTERN.match(text, position)
        offset = len(text[:position].encode("utf-8"))
        if match is None:
            raise ExprSyntaxError(f"Unexpected character '{text[position]}'", offset)
        kind = match.lastgroup
        if kind == "imag":
            kind = "number"
        if kind == "number":
            value = float(match.group("number"))
            yield _Token("imag" if match.group("imag") else "number", match.group(0), offset, value)
        elif kind != "space":
            yield _Token(kind or "", match.group(0), offset)
        position = match.end()
    yield _Token("end", "", len(text.encode("utf-8")))


class _Parser:
    def __init__(self, text: str) -> None:
        self._tokens = list(_tokenize(text))
        self._position = 0

    def _peek(self) -> _Token:
        return self._tokens[self._position]

    def _advance(self) -> _Token:
        token = self._tokens[self._position]
        if token.kind != "end":
            self._position += 1
        return token

    def _expect(self, kind: str, what: str) -> _Token:
        token = self._advance()
        if token.kind != kind:
            found = token.text or "end of input"
            raise ExprSyntaxError(f"Expected {what}, found '{found}'", token.offset)
        return token

    @staticmethod
    def _left_binding(token: _Token) -> int:
        if token.kind == "op":
            return _INFIX_BINDING[token.text]
        return 0

    def parse(self) -> Expr:
        expr = self._expression()
        token = self._peek()
        if token.kind != "end":
            raise ExprSyntaxError(f"Unexpected '{token.text}'", token.offset)
        return expr

    def _expression(self, right_binding: int = 0) -> Expr:
        left = self._prefix(self._advance())
        while right_binding < self._left_binding(self._peek()):
            left = self._infix(self._advance(), left)
        return left

    def _prefix(self, token: _Token) -> Expr:
        match token.kind:
            case "number":
                return Number(complex(token.value))
            case "imag":
                return Number(complex(0.0, token.value))
            case "lparen":
                inner = self._expression()
                self._expect("rparen", "')'")
                return inner
            case "op" if token.text == "-":
                return Neg(self._expression(_UNARY))
            case "ident":
                return self._identifier(token)
            case "end":
                raise ExprSyntaxError("Unexpected end of input", token.offset)
        raise ExprSyntaxError(f"Unexpected '{token.text}'", token.offset)

    def _infix(self, token: _Token, left: Expr) -> Expr:
        binding = _INFIX_BINDING[token.text]
        # Right-associative: parse the exponent one step looser
        right = self._expression(binding - 1 if token.text == "^" else binding)
        return BinOp(token.text, left, right)

    def _identifier(self, token: _Token) -> Expr:
        name = token.text
        if self._peek().kind == "lparen":
            if name not in FUNCTIONS:
                raise UnknownIdentifierError(name, token.offset)
            self._advance()
            args: list[Expr] = []
            if self._peek().kind != "rparen":
                args.append(self._expression())
                while self._peek().kind == "comma":
                    self._advance()
                    args.append(self._expression())
            self._expect("rparen", "')'")
            if len(args) != FUNCTION_ARITY[name]:
                raise ArityError(name, FUNCTION_ARITY[name], len(args), token.offset)
            return Call(name, tuple(args))
        if name in VARIABLES:
            return Variable(name)
        if name in CONSTANTS:
            return Constant(name)
        if name in FUNCTIONS:
            raise ExprSyntaxError(f"Function '{name}' must be called with parentheses", token.offset)
        raise UnknownIdentifierError(name, token.offset)


def parse(text: str) -> Expr:
    """Parse an expression string into an AST.

    Raises:
        ExprSyntaxError: Malformed input (carries the byte offset).
        UnknownIdentifierError: A name that is not a variable, constant or function.
        ArityError: A function called with the wrong number of arguments.
    """
    return _Parser(text).parse()


def _number_text(value: complex) -> str:
    if value.imag == 0:
        return repr(value.real)
    if value.real == 0:
        return f"{value.imag!r}i"
    return f"({value.real!r} + {value.imag!r}i)"


def to_text(expr: Expr) -> str:
    """Canonical text form; parse(to_text(e)) == e."""
    match expr:
        case Number(value):
            return _number_text(value)
        case Constant(name) | Variable(name):
            return name
        case Neg(operand):
            return f"(-{to_text(operand)})"
        case BinOp(op, left, right):
            return f"({to_text(left)} {op} {to_text(right)})"
        case Call(func, args):
            return f"{func}({', '.join(to_text(a) for a in args)})"
    raise TypeError(f"Not an expression node: {expr!r}")


def variables(expr: Expr) -> set[str]:
    """Names of the variables referenced by an expression."""
    match expr:
        case Variable(name):
            return {name}
        case Neg(operand):
            return variables(operand)
        case BinOp(_, left, right):
            return variables(left) | variables(right)
        case Call(_, args):
            return set().union(*(variables(a) for a in args))
    return set()


def _power(base: np.ndarray, exponent: np.ndarray) -> np.ndarray:
    real_operands = not np.any(base.imag) and not np.any(exponent.imag)
    if real_operands and (np.all(base.real > 0) or np.all(exponent.real == np.round(exponent.real))):
        return np.power(base.real, exponent.real).astype(np.complex128)
    # Principal branch
    return np.power(base, exponent)


def _evaluate(expr: Expr, e: np.ndarray, ep: np.ndarray) -> np.ndarray:
    match expr:
        case Number(value):
            result = np.asarray(value, dtype=np.complex128)
        case Constant(name):
            result = np.asarray(CONSTANTS[name], dtype=np.complex128)
        case Variable(name):
            result = (e if name == "E" else ep).astype(np.complex128)
        case Neg(operand):
            # 0 - x keeps a +0 imaginary part, so sqrt and ^ stay on the principal branch
            result = 0 - _evaluate(operand, e, ep)
        case BinOp(op, left, right):
            lhs = _evaluate(left, e, ep)
            rhs = _evaluate(right, e, ep)
            if op == "+":
                result = lhs + rhs
            elif op == "-":
                result = lhs - rhs
            elif op == "*":
                result = lhs * rhs
            elif op == "/":
                result = lhs / rhs
            else:
                result = _power(lhs, rhs)
        case Call(func, args):
            result = np.asarray(FUNCTIONS[func](_evaluate(args[0], e, ep)), dtype=np.complex128)
        case _:
            raise TypeError(f"Not an expression node: {expr!r}")
    if not np.all(np.isfinite(result)):
        raise ExprEvaluationError(to_text(expr))
    return result


def evaluate_array(expr: Expr, e: np.ndarray | float, ep: np.ndarray | float = 0.0) -> np.ndarray:
    """Evaluate over broadcast arrays of E and Ep.

    Raises:
        ExprEvaluationError: If any node produces a non-finite value; the error names that node.
    """
    e_values = np.asarray(e, dtype=float)
    ep_values = np.asarray(ep, dtype=float)
    shape = np.broadcast_shapes(e_values.shape, ep_values.shape)
    with np.errstate(all="ignore"):
        result = _evaluate(expr, e_values, ep_values)
    return np.array(np.broadcast_to(result, shape), dtype=np.complex128)


def evaluate(expr: Expr, e: float = 0.0, ep: float = 0.0) -> complex:
    """Evaluate at a single (E, Ep) point."""
    return complex(evaluate_array(expr, e, ep)[()])
