"""Scalar-field expressions in the base coordinates ``u`` and ``v``.

Grammar (whitespace is insignificant)::

    expr    = term { ("+" | "-") term } ;
    term    = unary { ("*" | "/") unary } ;
    unary   = "-" unary | power ;
    power   = atom [ "^" integer ] ;
    atom    = number | "u" | "v" | func "(" expr ")" | "(" expr ")" ;
    func    = "sin" | "cos" | "exp" ;
    integer = digit { digit } ;
    number  = integer [ "." { digit } ] [ exponent ] | "." digit { digit } [ exponent ] ;
    exponent = ("e" | "E") [ "+" | "-" ] integer ;

``^`` binds tighter than unary minus, so ``-u^2`` is ``-(u^2)``.  The exponent
must be a non-negative integer literal.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from . import hyperdual as hd

__all__ = [
    "Num",
    "Var",
    "Unary",
    "Binary",
    "Pow",
    "ScalarFieldExpr",
    "ExprError",
    "ExprSyntaxError",
    "UnknownIdentifierError",
    "ExprEvaluationError",
    "parse_expr",
    "eval_expr",
    "to_source",
]

VARIABLES = ("u", "v")
FUNCTIONS = ("sin", "cos", "exp")


class ExprError(ValueError):
    pass


class ExprSyntaxError(ExprError):
    def __init__(self, message: str, offset: int, expected: frozenset = frozenset()):
        self.offset = offset
        self.expected = frozenset(expected)
        detail = f" (expected one of: {', '.join(sorted(self.expected))})" if self.expected else ""
        super().__init__(f"{message} at offset {offset}{detail}")


class UnknownIdentifierError(ExprSyntaxError):
    def __init__(self, name: str, offset: int):
        self.name = name
        super().__init__(f"unknown identifier {name!r}", offset)


class ExprEvaluationError(ExprError, ArithmeticError):
    pass


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Unary:
    op: str  # neg | sin | cos | exp
    arg: "Node"


@dataclass(frozen=True)
class Binary:
    op: str  # + - * /
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: int


Node = Union[Num, Var, Unary, Binary, Pow]


@dataclass(frozen=True)
class ScalarFieldExpr:
    root: Node
    source: str = ""

    def __call__(self, u, v):
        return eval_expr(self, u, v)

    def __str__(self) -> str:
        return to_source(self)


_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^()]))"
)
_END = "<end>"


@dataclass
class _Tok:
    kind: str  # num | name | op | end
    text: str
    offset: int  # byte offset into the UTF-8 source


def _tokenize(source: str) -> list[_Tok]:
    toks: list[_Tok] = []
    pos = 0
    n = len(source)
    byte_offset = lambda i: len(source[:i].encode("utf-8"))  # noqa: E731
    while True:
        while pos < n and source[pos].isspace():
            pos += 1
        if pos >= n:
            toks.append(_Tok("end", _END, byte_offset(n)))
            return toks
        m = _TOKEN.match(source, pos)
        if m is None or m.end() == pos:
            raise ExprSyntaxError(f"unexpected character {source[pos]!r}", byte_offset(pos))
        kind = m.lastgroup
        start = m.start(kind)
        toks.append(_Tok(kind, m.group(kind), byte_offset(start)))
        pos = m.end()


class _Parser:
    _OPERAND = frozenset({"number", "u", "v", "sin", "cos", "exp", "(", "-"})

    def __init__(self, source: str):
        self.toks = _tokenize(source)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def advance(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def is_op(self, *ops: str) -> bool:
        return self.tok.kind == "op" and self.tok.text in ops

    def continuations(self) -> set:
        """Operators that may follow the operand just parsed."""
        ops = {"+", "-", "*", "/"}
        prev = self.toks[self.i - 2] if self.i >= 2 else None
        if not (prev is not None and prev.kind == "op" and prev.text == "^"):
            ops.add("^")
        return ops

    def parse(self) -> Node:
        node = self.expr()
        if self.tok.kind != "end":
            raise ExprSyntaxError(
                f"unexpected token {self.tok.text!r}", self.tok.offset, self.continuations() | {_END}
            )
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.is_op("+", "-"):
            op = self.advance().text
            node = Binary(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.is_op("*", "/"):
            op = self.advance().text
            tok = self.tok
            rhs = self.unary()
            if op == "/" and isinstance(rhs, Num) and rhs.value == 0.0:
                raise ExprSyntaxError("division by literal zero", tok.offset)
            node = Binary(op, node, rhs)
        return node

    def unary(self) -> Node:
        if self.is_op("-"):
            self.advance()
            return Unary("neg", self.unary())
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self.is_op("^"):
            self.advance()
            tok = self.tok
            if tok.kind != "num" or not tok.text.isdigit():
                raise ExprSyntaxError("exponent must be a non-negative integer literal", tok.offset, {"integer"})
            self.advance()
            return Pow(base, int(tok.text))
        return base

    def atom(self) -> Node:
        tok = self.tok
        if tok.kind == "num":
            self.advance()
            return Num(float(tok.text))
        if tok.kind == "name":
            self.advance()
            if tok.text in VARIABLES:
                return Var(tok.text)
            if tok.text in FUNCTIONS:
                if not self.is_op("("):
                    raise ExprSyntaxError(f"expected '(' after {tok.text}", self.tok.offset, {"("})
                self.advance()
                arg = self.expr()
                self.expect_close()
                return Unary(tok.text, arg)
            raise UnknownIdentifierError(tok.text, tok.offset)
        if self.is_op("("):
            self.advance()
            node = self.expr()
            self.expect_close()
            return node
        raise ExprSyntaxError(f"unexpected {tok.text!r}", tok.offset, self._OPERAND)

    def expect_close(self) -> None:
        if not self.is_op(")"):
            raise ExprSyntaxError(f"unexpected {self.tok.text!r}", self.tok.offset, self.continuations() | {")"})
        self.advance()


def parse_expr(source: str) -> ScalarFieldExpr:
    """Parse ``source`` into an expression tree.

    Raises :class:`ExprSyntaxError` (with byte offset and expected-token set)
    or :class:`UnknownIdentifierError`.
    """
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    return ScalarFieldExpr(_Parser(source).parse(), source)


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _fmt(node: Node, prec: int = 0) -> str:
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Pow):
        base = _fmt(node.base, 4)
        if isinstance(node.base, Pow):
            base = f"({base})"
        return f"{base}^{node.exponent}"
    if isinstance(node, Unary):
        if node.op == "neg":
            s = "-" + _fmt(node.arg, 3)
            return f"({s})" if prec > 3 else s
        return f"{node.op}({_fmt(node.arg)})"
    p = _PREC[node.op]
    # left-associative: the right operand needs parens at equal precedence
    s = f"{_fmt(node.left, p)} {node.op} {_fmt(node.right, p + 1)}"
    return f"({s})" if p < prec else s


def to_source(expr: ScalarFieldExpr | Node) -> str:
    """Render an expression back to text that reparses to the same tree."""
    root = expr.root if isinstance(expr, ScalarFieldExpr) else expr
    return _fmt(root)


def _eval(node: Node, env: dict):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return env[node.name]
    if isinstance(node, Pow):
        return _eval(node.base, env) ** node.exponent
    if isinstance(node, Unary):
        x = _eval(node.arg, env)
        if node.op == "neg":
            return -x
        if node.op == "sin":
            return hd.sin(x)
        if node.op == "cos":
            return hd.cos(x)
        return hd.exp(x)
    a = _eval(node.left, env)
    b = _eval(node.right, env)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    if float(b) == 0.0:
        raise ExprEvaluationError("division by zero at the evaluation point")
    return a / b


def eval_expr(expr: ScalarFieldExpr, u, v):
    """Evaluate ``expr`` at ``(u, v)``; inputs may be floats or hyper-duals."""
    root = expr.root if isinstance(expr, ScalarFieldExpr) else expr
    try:
        out = _eval(root, {"u": u, "v": v})
    except ZeroDivisionError as exc:
        raise ExprEvaluationError("division by zero at the evaluation point") from exc
    # constant subtrees come back as floats; keep the hyper-dual type when seeded
    for x in (u, v):
        if isinstance(x, hd.HyperDual) and not isinstance(out, hd.HyperDual):
            return hd.HyperDual.constant(float(out), x.dim)
    return out
