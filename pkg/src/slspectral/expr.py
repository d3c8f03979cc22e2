"""Small expression language for coefficient functions of one variable ``y``.

Supports ``+ - * / ^`` (with ``^`` binding tighter than unary minus and
right-associative), the functions exp/log/sin/cos/sqrt/abs, the constants
``pi`` and ``i``, and complex evaluation on the principal branch.  Trees are
immutable dataclasses; structural equality is plain ``==``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

__all__ = [
    "ExprError",
    "ExprSyntaxError",
    "ExprDomainError",
    "Const",
    "Var",
    "Neg",
    "BinOp",
    "Call",
    "parse",
    "evaluate",
    "differentiate",
    "to_string",
    "compile_scalar",
]


class ExprError(ValueError):
    """Base class for expression failures."""


class ExprSyntaxError(ExprError):
    """Malformed input text; carries the byte offset of the failure."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


class ExprDomainError(ExprError):
    """Evaluation hit a pole or an undefined principal-branch value."""


@dataclass(frozen=True)
class Const:
    value: complex


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * / ^
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    name: str  # exp log sin cos sqrt abs
    arg: "Expr"


Expr = Union[Const, Var, Neg, BinOp, Call]

_FUNCTIONS = ("exp", "log", "sin", "cos", "sqrt", "abs")
_NAMED_CONSTANTS = {"pi": complex(math.pi), "i": 1j}


# ---------------------------------------------------------------------------
# tokenizer / parser

def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    n = len(text)
    pos = 0
    while pos < n:
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        if ch in "+-*/^()":
            tokens.append((ch, ch, pos))
            pos += 1
            continue
        if ch.isdigit() or (ch == "." and pos + 1 < n and text[pos + 1].isdigit()):
            start = pos
            while pos < n and (text[pos].isdigit() or text[pos] == "."):
                pos += 1
            if pos < n and text[pos] in "eE":
                look = pos + 1
                if look < n and text[look] in "+-":
                    look += 1
                if look < n and text[look].isdigit():
                    pos = look
                    while pos < n and text[pos].isdigit():
                        pos += 1
            lit = text[start:pos]
            try:
                float(lit)
            except ValueError:
                raise ExprSyntaxError(f"bad numeric literal {lit!r}", start) from None
            tokens.append(("num", lit, start))
            continue
        if ch.isalpha() or ch == "_":
            start = pos
            while pos < n and (text[pos].isalnum() or text[pos] == "_"):
                pos += 1
            tokens.append(("ident", text[start:pos], start))
            continue
        raise ExprSyntaxError(f"unexpected character {ch!r}", pos)
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, tokens: list[tuple[str, str, int]]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.pos]

    def advance(self) -> tuple[str, str, int]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str) -> tuple[str, str, int]:
        tok = self.peek()
        if tok[0] != kind:
            raise ExprSyntaxError(f"expected {kind!r}, found {tok[1]!r}", tok[2])
        return self.advance()

    # expr := term (('+'|'-') term)*
    def parse_expr(self) -> Expr:
        node = self.parse_term()
        while self.peek()[0] in "+-":
            op = self.advance()[0]
            node = _make_binop(op, node, self.parse_term())
        return node

    # term := unary (('*'|'/') unary)*
    def parse_term(self) -> Expr:
        node = self.parse_unary()
        while self.peek()[0] in "*/":
            op = self.advance()[0]
            node = _make_binop(op, node, self.parse_unary())
        return node

    # unary := '-' unary | power     (so ^ binds tighter than unary minus)
    def parse_unary(self) -> Expr:
        if self.peek()[0] == "-":
            self.advance()
            return _make_neg(self.parse_unary())
        return self.parse_power()

    # power := atom ('^' unary)?     (right-associative)
    def parse_power(self) -> Expr:
        base = self.parse_atom()
        if self.peek()[0] == "^":
            self.advance()
            return _make_binop("^", base, self.parse_unary())
        return base

    def parse_atom(self) -> Expr:
        kind, text, off = self.peek()
        if kind == "num":
            self.advance()
            return Const(complex(float(text)))
        if kind == "(":
            self.advance()
            node = self.parse_expr()
            self.expect(")")
            return node
        if kind == "ident":
            self.advance()
            if text == "y":
                return Var()
            if text in _NAMED_CONSTANTS:
                return Const(_NAMED_CONSTANTS[text])
            if text in _FUNCTIONS:
                self.expect("(")
                arg = self.parse_expr()
                self.expect(")")
                return _make_call(text, arg)
            raise ExprSyntaxError(f"unknown identifier {text!r}", off)
        raise ExprSyntaxError(f"unexpected token {text!r}" if text else "unexpected end of input", off)


def parse(text: str) -> Expr:
    """Parse ``text`` into an expression tree (constant subtrees folded)."""
    tokens = _tokenize(text)
    parser = _Parser(tokens)
    node = parser.parse_expr()
    kind, text_, off = parser.peek()
    if kind != "end":
        raise ExprSyntaxError(f"trailing input {text_!r}", off)
    return node


# ---------------------------------------------------------------------------
# construction with constant folding

def _make_neg(arg: Expr) -> Expr:
    if isinstance(arg, Const):
        return Const(-arg.value)
    return Neg(arg)


def _make_binop(op: str, left: Expr, right: Expr) -> Expr:
    if isinstance(left, Const) and isinstance(right, Const):
        return Const(_apply_scalar_op(op, left.value, right.value))
    return BinOp(op, left, right)


def _make_call(name: str, arg: Expr) -> Expr:
    if isinstance(arg, Const):
        return Const(_apply_scalar_call(name, arg.value))
    return Call(name, arg)


def _apply_scalar_op(op: str, a: complex, b: complex) -> complex:
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if op == "/":
        if b == 0:
            raise ExprDomainError("division by zero")
        return a / b
    if op == "^":
        return _scalar_pow(a, b)
    raise AssertionError(op)


def _scalar_pow(a: complex, b: complex) -> complex:
    if a == 0:
        if b.real > 0 and b.imag == 0:
            return 0j
        raise ExprDomainError("zero raised to a non-positive power")
    # real base, integer exponent: stay exact and off the branch cut
    if a.imag == 0 and b.imag == 0 and b.real == int(b.real):
        return complex(a.real ** int(b.real))
    return cmath.exp(b * cmath.log(a))


def _apply_scalar_call(name: str, v: complex) -> complex:
    if name == "exp":
        return cmath.exp(v)
    if name == "log":
        if v == 0:
            raise ExprDomainError("log of zero")
        return cmath.log(v)
    if name == "sin":
        return cmath.sin(v)
    if name == "cos":
        return cmath.cos(v)
    if name == "sqrt":
        return cmath.sqrt(v)
    if name == "abs":
        return complex(abs(v))
    raise AssertionError(name)


# ---------------------------------------------------------------------------
# evaluation

def evaluate(node: Expr, y):
    """Evaluate at ``y`` (complex scalar or numpy array), principal branches."""
    if isinstance(y, np.ndarray):
        return _eval_array(node, np.asarray(y, dtype=np.complex128))
    return _eval_scalar(node, complex(y))


def _eval_scalar(node: Expr, y: complex) -> complex:
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Var):
        return y
    if isinstance(node, Neg):
        return -_eval_scalar(node.arg, y)
    if isinstance(node, BinOp):
        return _apply_scalar_op(node.op, _eval_scalar(node.left, y), _eval_scalar(node.right, y))
    if isinstance(node, Call):
        return _apply_scalar_call(node.name, _eval_scalar(node.arg, y))
    raise AssertionError(node)


def _eval_array(node: Expr, y: np.ndarray) -> np.ndarray:
    if isinstance(node, Const):
        return np.full(y.shape, node.value, dtype=np.complex128)
    if isinstance(node, Var):
        return y.copy()
    if isinstance(node, Neg):
        return -_eval_array(node.arg, y)
    if isinstance(node, BinOp):
        a = _eval_array(node.left, y)
        b = _eval_array(node.right, y)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if node.op == "/":
            if np.any(b == 0):
                raise ExprDomainError("division by zero on the grid")
            return a / b
        if node.op == "^":
            return _array_pow(a, b)
        raise AssertionError(node.op)
    if isinstance(node, Call):
        v = _eval_array(node.arg, y)
        if node.name == "exp":
            return np.exp(v)
        if node.name == "log":
            if np.any(v == 0):
                raise ExprDomainError("log of zero on the grid")
            return np.log(v)
        if node.name == "sin":
            return np.sin(v)
        if node.name == "cos":
            return np.cos(v)
        if node.name == "sqrt":
            return np.sqrt(v)
        if node.name == "abs":
            return np.abs(v).astype(np.complex128)
        raise AssertionError(node.name)
    raise AssertionError(node)


def _array_pow(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # exact real-base integer-exponent path, matching _scalar_pow
    b0 = b.flat[0]
    if np.all(b == b0) and b0.imag == 0 and b0.real == int(b0.real):
        if int(b0.real) < 0 and np.any(a == 0):
            raise ExprDomainError("zero raised to a negative power on the grid")
        with np.errstate(divide="ignore", invalid="ignore"):
            out = a ** int(b0.real)
        return out
    if np.any(a == 0):
        raise ExprDomainError("zero base in a general power on the grid")
    return np.exp(b * np.log(a))


def compile_scalar(node: Expr):
    """Return a fast ``complex -> complex`` callable for repeated scalar use."""
    code = _codegen(node)
    namespace = {
        "exp": cmath.exp,
        "log": cmath.log,
        "sin": cmath.sin,
        "cos": cmath.cos,
        "sqrt": cmath.sqrt,
        "abs": abs,
    }
    return eval(f"lambda y: {code}", namespace)  # generated from our own AST only


def _codegen(node: Expr) -> str:
    if isinstance(node, Const):
        return f"({node.value!r})"
    if isinstance(node, Var):
        return "y"
    if isinstance(node, Neg):
        return f"(-{_codegen(node.arg)})"
    if isinstance(node, BinOp):
        op = "**" if node.op == "^" else node.op
        return f"({_codegen(node.left)}{op}{_codegen(node.right)})"
    if isinstance(node, Call):
        return f"{node.name}({_codegen(node.arg)})"
    raise AssertionError(node)


# ---------------------------------------------------------------------------
# differentiation

def differentiate(node: Expr) -> Expr:
    """Symbolic d/dy with constant folding; ``abs`` is rejected."""
    if isinstance(node, Const):
        return Const(0j)
    if isinstance(node, Var):
        return Const(1 + 0j)
    if isinstance(node, Neg):
        return _make_neg(differentiate(node.arg))
    if isinstance(node, BinOp):
        l, r = node.left, node.right
        dl, dr = differentiate(l), differentiate(r)
        if node.op in "+-":
            return _make_binop(node.op, dl, dr)
        if node.op == "*":
            return _make_binop("+", _make_binop("*", dl, r), _make_binop("*", l, dr))
        if node.op == "/":
            num = _make_binop("-", _make_binop("*", dl, r), _make_binop("*", l, dr))
            return _make_binop("/", num, _make_binop("^", r, Const(2 + 0j)))
        if node.op == "^":
            if isinstance(r, Const):
                # d(l^c) = c*l^(c-1)*l', avoids log(l) at poles/branch cuts
                power = _make_binop("^", l, Const(r.value - 1))
                return _make_binop("*", _make_binop("*", r, power), dl)
            ln = _make_call("log", l)
            bracket = _make_binop(
                "+",
                _make_binop("*", dr, ln),
                _make_binop("/", _make_binop("*", r, dl), l),
            )
            return _make_binop("*", node, bracket)
        raise AssertionError(node.op)
    if isinstance(node, Call):
        da = differentiate(node.arg)
        a = node.arg
        if node.name == "exp":
            return _make_binop("*", node, da)
        if node.name == "log":
            return _make_binop("/", da, a)
        if node.name == "sin":
            return _make_binop("*", _make_call("cos", a), da)
        if node.name == "cos":
            return _make_binop("*", _make_neg(_make_call("sin", a)), da)
        if node.name == "sqrt":
            return _make_binop("/", da, _make_binop("*", Const(2 + 0j), node))
        if node.name == "abs":
            raise ExprError("abs is not differentiable")
        raise AssertionError(node.name)
    raise AssertionError(node)


# ---------------------------------------------------------------------------
# printing

_PREC_ADD = 0
_PREC_MUL = 1
_PREC_NEG = 2
_PREC_POW = 3
_PREC_ATOM = 4


def _prec(node: Expr) -> int:
    if isinstance(node, BinOp):
        if node.op in "+-":
            return _PREC_ADD
        if node.op in "*/":
            return _PREC_MUL
        return _PREC_POW
    if isinstance(node, Neg):
        return _PREC_NEG
    if isinstance(node, Const):
        v = node.value
        # rank by the top-level operator of the printed form so reparsing
        # regroups into the identical folded tree
        if v.imag == 0:
            return _PREC_ATOM if v.real >= 0 else _PREC_NEG
        if v.real == 0:
            return _PREC_ATOM if v.imag == 1 else (_PREC_NEG if v.imag == -1 else _PREC_MUL)
        return _PREC_ADD
    return _PREC_ATOM


def _fmt_real(v: float) -> str:
    return repr(v)


def _fmt_const(v: complex) -> str:
    if v.imag == 0:
        return _fmt_real(v.real)
    if v.real == 0:
        if v.imag == 1:
            return "i"
        if v.imag == -1:
            return "-i"
        return f"{_fmt_real(v.imag)}*i"
    im = f"{_fmt_real(abs(v.imag))}*i" if abs(v.imag) != 1 else "i"
    sign = "+" if v.imag > 0 else "-"
    return f"{_fmt_real(v.real)}{sign}{im}"


def to_string(node: Expr) -> str:
    """Render source text; ``parse(to_string(t)) == t`` for folded trees."""
    if isinstance(node, Const):
        return _fmt_const(node.value)
    if isinstance(node, Var):
        return "y"
    if isinstance(node, Neg):
        inner = to_string(node.arg)
        if _prec(node.arg) < _PREC_NEG:
            inner = f"({inner})"
        return f"-{inner}"
    if isinstance(node, Call):
        return f"{node.name}({to_string(node.arg)})"
    if isinstance(node, BinOp):
        p = _prec(node)
        left = to_string(node.left)
        right = to_string(node.right)
        if node.op == "^":
            # right-associative; unary minus is legal unparenthesized on the right
            if _prec(node.left) <= p:
                left = f"({left})"
            if _prec(node.right) < _PREC_NEG:
                right = f"({right})"
        else:
            # left-associative grammar: right children at equal precedence
            # must be parenthesized to survive a structural round-trip
            if _prec(node.left) < p:
                left = f"({left})"
            if _prec(node.right) <= p:
                right = f"({right})"
        return f"{left}{node.op}{right}"
    raise AssertionError(node)
