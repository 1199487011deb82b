"""
Scalar formulas in one integer variable n.

Grammar (whitespace insensitive, left associative):

    expr  := term (('+' | '-') term)*
    term  := unary (('*' | '/') unary)*
    unary := '-' unary | power
    power := atom ('^' signed-integer)?
    atom  := number | 'n' | '(' expr ')'

Unary minus binds looser than '^', so "-2^2" is -4.
"""

import logging
import re
from dataclasses import dataclass
from typing import List, Union

import numpy as np

from utils.errors import EvaluationError, ExprSyntaxError

logger = logging.getLogger(__name__)

MAX_EXPONENT = 12
MAX_DEPTH = 64


@dataclass(frozen=True)
class Number:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    child: 'ExprAst'


@dataclass(frozen=True)
class BinOp:
    op: str          # one of + - * /
    left: 'ExprAst'
    right: 'ExprAst'


@dataclass(frozen=True)
class Pow:
    base: 'ExprAst'
    exponent: int


ExprAst = Union[Number, Var, Neg, BinOp, Pow]


_TOKEN_RE = re.compile(
    r'\s*(?:'
    r'(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)'
    r'|(?P<name>[A-Za-z_]\w*)'
    r'|(?P<op>[-+*/^()])'
    r')'
)


@dataclass(frozen=True)
class _Token:
    kind: str      # 'number', 'name', 'op', 'end'
    text: str
    offset: int


def _tokenize(src: str) -> List[_Token]:
    tokens = []
    pos = 0
    while pos < len(src):
        if src[pos:].strip() == '':
            break
        match = _TOKEN_RE.match(src, pos)
        if match is None or match.lastgroup is None:
            offset = pos + (len(src[pos:]) - len(src[pos:].lstrip()))
            raise ExprSyntaxError(f"Unexpected character {src[offset]!r}", offset)
        kind = match.lastgroup
        tokens.append(_Token(kind, match.group(kind), match.start(kind)))
        pos = match.end()
    tokens.append(_Token('end', '', len(src)))
    return tokens


class _Parser:
    """Recursive descent over the token list; every error carries a byte offset."""

    def __init__(self, src: str):
        self.tokens = _tokenize(src)
        self.pos = 0
        self.nesting = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def accept(self, *ops: str) -> bool:
        tok = self.peek()
        return tok.kind == 'op' and tok.text in ops

    def enter(self, tok: _Token):
        self.nesting += 1
        if self.nesting > MAX_DEPTH:
            raise ExprSyntaxError(f"Expression nests deeper than {MAX_DEPTH}", tok.offset)

    def parse(self) -> ExprAst:
        ast = self.expr()
        tok = self.peek()
        if tok.kind != 'end':
            raise ExprSyntaxError(f"Unexpected {tok.text!r}", tok.offset)
        return ast

    def expr(self) -> ExprAst:
        node = self.term()
        while self.accept('+', '-'):
            op = self.advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> ExprAst:
        node = self.unary()
        while self.accept('*', '/'):
            op = self.advance().text
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> ExprAst:
        if self.accept('-'):
            tok = self.advance()
            self.enter(tok)
            child = self.unary()
            self.nesting -= 1
            return Neg(child)
        return self.power()

    def power(self) -> ExprAst:
        base = self.atom()
        if not self.accept('^'):
            return base
        self.advance()
        sign = 1
        if self.accept('+', '-'):
            sign = -1 if self.advance().text == '-' else 1
        tok = self.advance()
        if tok.kind != 'number' or not tok.text.isdigit():
            raise ExprSyntaxError("Exponent must be an integer literal", tok.offset)
        exponent = sign * int(tok.text)
        if abs(exponent) > MAX_EXPONENT:
            raise ExprSyntaxError(
                f"Exponent {exponent} outside [-{MAX_EXPONENT}, {MAX_EXPONENT}]", tok.offset
            )
        return Pow(base, exponent)

    def atom(self) -> ExprAst:
        tok = self.advance()
        if tok.kind == 'number':
            value = float(tok.text)
            if not np.isfinite(value):
                raise ExprSyntaxError(f"Number {tok.text} out of range", tok.offset)
            return Number(value)
        if tok.kind == 'name':
            if tok.text != 'n':
                raise ExprSyntaxError(f"Unknown identifier {tok.text!r}", tok.offset)
            return Var()
        if tok.kind == 'op' and tok.text == '(':
            self.enter(tok)
            node = self.expr()
            close = self.advance()
            if close.kind != 'op' or close.text != ')':
                raise ExprSyntaxError("Expected ')'", close.offset)
            self.nesting -= 1
            return node
        if tok.kind == 'end':
            raise ExprSyntaxError("Unexpected end of input", tok.offset)
        raise ExprSyntaxError(f"Unexpected {tok.text!r}", tok.offset)


def depth(ast: ExprAst) -> int:
    if isinstance(ast, (Number, Var)):
        return 1
    if isinstance(ast, Neg):
        return 1 + depth(ast.child)
    if isinstance(ast, Pow):
        return 1 + depth(ast.base)
    return 1 + max(depth(ast.left), depth(ast.right))


def parse(src: str) -> ExprAst:
    """
    Parse a formula in n.

    Args:
        src: Nonempty ASCII formula, e.g. "1 + 1/(2*(n+1)^2)"

    Returns:
        Immutable expression tree

    Raises:
        ExprSyntaxError: syntax error, exponent out of range, unknown identifier,
            or a tree deeper than 64 (message and ``offset`` give the position)
    """
    if not src or not src.strip():
        raise ExprSyntaxError("Empty formula", 0)
    if not src.isascii():
        bad = next(i for i, ch in enumerate(src) if not ch.isascii())
        raise ExprSyntaxError("Non-ASCII character", len(src[:bad].encode('utf-8')))

    ast = _Parser(src).parse()
    if depth(ast) > MAX_DEPTH:
        raise ExprSyntaxError(f"Expression tree deeper than {MAX_DEPTH}", 0)
    return ast


def evaluate(ast: ExprAst, n):
    """
    Evaluate at an integer n >= 1, or elementwise over an integer array of such n.

    Raises:
        EvaluationError: division by zero or a non-finite result
    """
    n_arr = np.asarray(n)
    if np.any(n_arr < 1):
        raise ValueError(f"n must be >= 1, got {n}")

    with np.errstate(all='ignore'):
        value = _eval(ast, n_arr.astype(np.float64), n)

    finite = np.isfinite(value)
    if not np.all(finite):
        raise EvaluationError(f"Formula {to_source(ast)} is not finite at n={_first_at(~finite, n)}")
    if n_arr.ndim == 0:
        return float(value)
    return np.broadcast_to(value, n_arr.shape).astype(np.float64)


def _first_at(mask, n) -> int:
    """First n where ``mask`` holds."""
    n_arr = np.asarray(n)
    if n_arr.ndim == 0:
        return int(n_arr)
    mask = np.broadcast_to(mask, n_arr.shape)
    return int(n_arr[np.argmax(mask)])


def _eval(ast: ExprAst, x: np.ndarray, n):
    if isinstance(ast, Number):
        return np.float64(ast.value)
    if isinstance(ast, Var):
        return x
    if isinstance(ast, Neg):
        return -_eval(ast.child, x, n)
    if isinstance(ast, Pow):
        base = _eval(ast.base, x, n)
        if ast.exponent < 0 and np.any(base == 0):
            raise EvaluationError(f"Division by zero in {to_source(ast)} at n={_first_at(base == 0, n)}")
        return base ** ast.exponent

    left = _eval(ast.left, x, n)
    right = _eval(ast.right, x, n)
    if ast.op == '+':
        return left + right
    if ast.op == '-':
        return left - right
    if ast.op == '*':
        return left * right
    if np.any(right == 0):
        raise EvaluationError(f"Division by zero in {to_source(ast)} at n={_first_at(right == 0, n)}")
    return left / right


def to_source(ast: ExprAst) -> str:
    """Fully parenthesized source text; parse(to_source(t)) == t."""
    if isinstance(ast, Number):
        return repr(ast.value)
    if isinstance(ast, Var):
        return 'n'
    if isinstance(ast, Neg):
        return f"-({to_source(ast.child)})"
    if isinstance(ast, Pow):
        base = to_source(ast.base)
        if not isinstance(ast.base, (Number, Var, BinOp)):
            base = f"({base})"
        return f"{base}^{ast.exponent}"
    return f"({to_source(ast.left)} {ast.op} {to_source(ast.right)})"
