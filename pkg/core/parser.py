"""
Tokenizer and recursive-descent parser for constraint and field expressions.

    <EXPR>     -> <TERM> { ( '+' | '-' ) <TERM> }*
    <TERM>     -> <UNARY> { ( '*' | '/' ) <UNARY> }*
    <UNARY>    -> ( '-' | '+' ) <UNARY> | <POWER>
    <POWER>    -> <PRIMARY> [ '^' <EXPONENT> ]
    <EXPONENT> -> [ '-' ] INTEGER | '(' [ '-' ] INTEGER ')'
    <PRIMARY>  -> NUMBER | NAME | FUNC '(' <EXPR> ')' | '(' <EXPR> ')'

with FUNC one of sin, cos, sqrt, sqr.
"""
import re
from dataclasses import dataclass
from typing import List, Tuple

from core.errors import ExprSyntaxError, UnknownIdentifierError
from core.expr import (
    Add, Const, Cos, Declaration, Div, Expr, Mul, Neg, PowInt, Sin, Sqr, Sqrt, Sub,
)

FUNCTIONS = {"sin": Sin, "cos": Cos, "sqrt": Sqrt, "sqr": Sqr}

_TOKEN_SPEC = [
    ("NUMBER", r"(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?"),
    ("NAME", r"[A-Za-z_][A-Za-z_0-9]*"),
    ("LE", r"<="),
    ("ASSIGN", r":="),
    ("OP", r"[-+*/^(),&|!:\[\]]"),
    ("SKIP", r"[ \t\r]+"),
    ("MISMATCH", r"."),
]
_TOKEN_RE = re.compile("|".join(f"(?P<{name}>{pattern})" for name, pattern in _TOKEN_SPEC))


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str, line: int = 1, column: int = 1) -> List[Token]:
    """Split text into tokens; positions are reported relative to (line, column)."""
    tokens = []
    for m in _TOKEN_RE.finditer(text):
        kind = m.lastgroup
        col = column + m.start()
        if kind == "SKIP":
            continue
        if kind == "MISMATCH":
            raise ExprSyntaxError(f"unexpected character '{m.group()}'", line, col)
        if kind == "OP":
            kind = m.group()
        tokens.append(Token(kind, m.group(), line, col))
    tokens.append(Token("EOF", "", line, column + len(text)))
    return tokens


class TokenStream:
    def __init__(self, tokens: List[Token]):
        self.tokens = tokens
        self.pos = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, kind: str) -> bool:
        return self.current.kind == kind

    def accept(self, kind: str) -> bool:
        if self.peek(kind):
            self.pos += 1
            return True
        return False

    def expect(self, kind: str) -> Token:
        tok = self.current
        if tok.kind != kind:
            raise self.error(f"expected '{kind}'")
        self.pos += 1
        return tok

    def error(self, message: str) -> ExprSyntaxError:
        tok = self.current
        found = "end of input" if tok.kind == "EOF" else f"'{tok.text}'"
        return ExprSyntaxError(f"{message}, found {found}", tok.line, tok.column)


class ExprParser:
    def __init__(self, stream: TokenStream, decl: Declaration):
        self.stream = stream
        self.decl = decl

    def expression(self) -> Expr:
        node = self._term()
        while True:
            if self.stream.accept("+"):
                node = Add(node, self._term())
            elif self.stream.accept("-"):
                node = Sub(node, self._term())
            else:
                return node

    def _term(self) -> Expr:
        node = self._unary()
        while True:
            if self.stream.accept("*"):
                node = Mul(node, self._unary())
            elif self.stream.accept("/"):
                node = Div(node, self._unary())
            else:
                return node

    def _unary(self) -> Expr:
        if self.stream.accept("-"):
            return Neg(self._unary())
        if self.stream.accept("+"):
            return self._unary()
        return self._power()

    def _power(self) -> Expr:
        base = self._primary()
        if self.stream.accept("^"):
            return PowInt(base, self._exponent())
        return base

    def _exponent(self) -> int:
        paren = self.stream.accept("(")
        sign = -1 if self.stream.accept("-") else 1
        tok = self.stream.current
        if tok.kind != "NUMBER" or not tok.text.isdigit():
            raise self.stream.error("expected an integer exponent")
        self.stream.pos += 1
        if paren:
            self.stream.expect(")")
        return sign * int(tok.text)

    def _primary(self) -> Expr:
        tok = self.stream.current
        if tok.kind == "NUMBER":
            self.stream.pos += 1
            return Const(float(tok.text))
        if tok.kind == "NAME":
            self.stream.pos += 1
            if tok.text in FUNCTIONS:
                self.stream.expect("(")
                arg = self.expression()
                self.stream.expect(")")
                return FUNCTIONS[tok.text](arg)
            node = self.decl.lookup(tok.text)
            if node is None:
                raise UnknownIdentifierError(tok.text, tok.line, tok.column)
            return node
        if self.stream.accept("("):
            node = self.expression()
            self.stream.expect(")")
            return node
        raise self.stream.error("expected a number, identifier or '('")


def parse_expr(text: str, decl: Declaration, line: int = 1, column: int = 1) -> Expr:
    """Parse a single expression; the whole text must be consumed."""
    stream = TokenStream(tokenize(text, line, column))
    node = ExprParser(stream, decl).expression()
    if not stream.peek("EOF"):
        raise stream.error("unexpected trailing input")
    return node


def parse_expr_tuple(text: str, decl: Declaration, line: int = 1, column: int = 1) -> Tuple[Expr, ...]:
    """Parse a parenthesised, comma-separated list of expressions: ( e1 , e2 , ... )."""
    stream = TokenStream(tokenize(text, line, column))
    parser = ExprParser(stream, decl)
    stream.expect("(")
    items = [parser.expression()]
    while stream.accept(","):
        items.append(parser.expression())
    stream.expect(")")
    if not stream.peek("EOF"):
        raise stream.error("unexpected trailing input")
    return tuple(items)
