"""Recursive-descent parser for the expression grammar.

    expr   := term (('+'|'-') term)*
    term   := unary (('*'|'/') unary)*
    unary  := '-' unary | factor
    factor := base ('^' exponent)?
    base   := number | identifier | function '(' expr ')' | '(' expr ')'
    exponent := signed_rational | '(' signed_rational ')'

Unary minus is an extension of the published grammar; the pretty-printer
needs it for leading negative terms.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

import sympy

from .symbolic import FUNCTIONS, Expression, ExpressionError, VariableSpace, check_expression, sym


class ParseError(ValueError):
    def __init__(self, message: str, position: int, text: str = ""):
        self.message = message
        self.position = position
        self.text = text
        super().__init__(f"{message} at offset {position}")


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+[A-Za-z_]*)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))")


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[start]!r}", start, text)
        kind = m.lastgroup
        value = m.group(kind)
        start = m.start(kind)
        if kind == "num" and not value.isdigit():
            raise ParseError(f"malformed number {value!r}", start, text)
        tokens.append(_Tok(kind, value, start))
        pos = m.end()
    tokens.append(_Tok("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, allowed: frozenset[str]):
        self.text = text
        self.allowed = allowed
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.tokens[self.i]

    def error(self, message: str, tok: _Tok | None = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(message, tok.pos, self.text)

    def take(self, text: str | None = None) -> _Tok:
        tok = self.tok
        if text is not None and tok.text != text:
            found = "end of input" if tok.kind == "end" else repr(tok.text)
            raise self.error(f"expected {text!r}, found {found}")
        self.i += 1
        return tok

    def at(self, text: str) -> bool:
        return self.tok.kind == "op" and self.tok.text == text

    def parse(self) -> Expression:
        e = self.expr()
        if self.tok.kind != "end":
            raise self.error(f"unexpected {self.tok.text!r}")
        return e

    def expr(self) -> Expression:
        terms = [self.term()]
        while self.at("+") or self.at("-"):
            op = self.take().text
            t = self.term()
            terms.append(t if op == "+" else -t)
        return sympy.Add(*terms) if len(terms) > 1 else terms[0]

    def term(self) -> Expression:
        value = self.unary()
        while self.at("*") or self.at("/"):
            op = self.take()
            rhs = self.unary()
            if op.text == "*":
                value = value * rhs
            else:
                if rhs == 0:
                    raise ParseError("division by constant zero", op.pos, self.text)
                value = value / rhs
        return value

    def unary(self) -> Expression:
        if self.at("-"):
            self.take()
            return -self.unary()
        return self.factor()

    def factor(self) -> Expression:
        base = self.base()
        if self.at("^"):
            self.take()
            if self.at("("):
                self.take()
                exponent = self.signed_rational()
                self.take(")")
            else:
                exponent = self.signed_rational(bare=True)
            if base == 0 and exponent < 0:
                raise self.error("division by constant zero")
            return base ** exponent
        return base

    def signed_rational(self, bare: bool = False) -> sympy.Rational:
        """``p`` or ``p/q``; a bare exponent only takes ``/q`` when q is a number."""
        sign = 1
        if self.at("-"):
            self.take()
            sign = -1
        tok = self.tok
        if tok.kind != "num":
            raise self.error("expected a rational exponent")
        self.take()
        p, q = int(tok.text), 1
        nxt = self.tokens[self.i + 1] if self.i + 1 < len(self.tokens) else None
        if self.at("/") and not (bare and (nxt is None or nxt.kind != "num")):
            self.take()
            den = self.tok
            if den.kind != "num":
                raise self.error("malformed number: expected denominator")
            self.take()
            q = int(den.text)
            if q == 0:
                raise ParseError("malformed number: zero denominator", den.pos, self.text)
        return sympy.Rational(sign * p, q)

    def base(self) -> Expression:
        tok = self.tok
        if tok.kind == "num":
            self.take()
            return sympy.Integer(int(tok.text))
        if tok.kind == "ident":
            self.take()
            if tok.text in FUNCTIONS:
                if not self.at("("):
                    raise self.error(f"function {tok.text!r} needs an argument list")
                self.take("(")
                arg = self.expr()
                self.take(")")
                return FUNCTIONS[tok.text](arg)
            if tok.text not in self.allowed:
                raise ParseError(f"unknown identifier {tok.text!r}", tok.pos, self.text)
            return sym(tok.text)
        if self.at("("):
            self.take()
            e = self.expr()
            self.take(")")
            return e
        found = "end of input" if tok.kind == "end" else repr(tok.text)
        raise self.error(f"syntax error: unexpected {found}")


def parse(text: str, space: VariableSpace | None = None, *, names=None) -> Expression:
    """Parse ``text`` into an expression over the identifiers of ``space``.

    ``names`` overrides the allowed identifier set.
    """
    if names is None:
        if space is None:
            raise TypeError("parse() needs a VariableSpace or an explicit name set")
        names = space.names
    e = _Parser(text, frozenset(names)).parse()
    try:
        check_expression(e)
    except ExpressionError as exc:
        raise ParseError(str(exc), 0, text) from None
    return e
