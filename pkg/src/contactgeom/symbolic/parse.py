"""Recursive-descent parser for the component expression grammar.

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("+" | "-") unary | power
    power  := atom ("^" INTEGER)?
    atom   := INTEGER | IDENT | "(" expr ")"

Rational literals are written ``p/q`` and fall out of the division rule.
Floats and function calls are rejected.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Sequence

from ..errors import DivisionByZero, ParseError
from .rational import RationalFunction

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            col = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"unexpected character {text[col]!r}", f"column {col + 1}")
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    if any(k == "num" and i + 1 < len(tokens) and tokens[i + 1][1] == "." for i, (k, _, _) in enumerate(tokens)):
        raise ParseError("floating-point literals are not allowed")
    return tokens


class _Parser:
    def __init__(self, text: str, variables: Sequence[str]):
        self.text = text
        self.variables = tuple(variables)
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int] | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self) -> tuple[str, str, int]:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of expression", f"column {len(self.text) + 1}")
        self.i += 1
        return tok

    def fail(self, tok: tuple[str, str, int] | None, what: str) -> ParseError:
        if tok is None:
            return ParseError(f"{what} at end of expression", f"column {len(self.text) + 1}")
        return ParseError(f"{what}, found {tok[1]!r}", f"column {tok[2] + 1}")

    def parse(self) -> RationalFunction:
        if not self.tokens:
            raise ParseError("empty expression")
        value = self.expr()
        if self.peek() is not None:
            raise self.fail(self.peek(), "expected operator")
        return value

    def expr(self) -> RationalFunction:
        value = self.term()
        while (tok := self.peek()) is not None and tok[1] in "+-" and tok[0] == "op":
            self.take()
            rhs = self.term()
            value = value + rhs if tok[1] == "+" else value - rhs
        return value

    def term(self) -> RationalFunction:
        value = self.unary()
        while (tok := self.peek()) is not None and tok[0] == "op" and tok[1] in "*/":
            self.take()
            rhs = self.unary()
            if tok[1] == "*":
                value = value * rhs
            else:
                if rhs.is_zero():
                    raise ParseError("division by zero", f"column {tok[2] + 1}")
                value = value / rhs
        return value

    def unary(self) -> RationalFunction:
        tok = self.peek()
        if tok is not None and tok[0] == "op" and tok[1] in "+-":
            self.take()
            operand = self.unary()
            return -operand if tok[1] == "-" else operand
        return self.power()

    def power(self) -> RationalFunction:
        base = self.atom()
        tok = self.peek()
        if tok is not None and tok[0] == "op" and tok[1] == "^":
            self.take()
            exp = self.peek()
            if exp is None or exp[0] != "num":
                raise self.fail(exp, "exponent must be a non-negative integer literal")
            self.take()
            try:
                return base ** int(exp[1])
            except DivisionByZero:
                raise ParseError("zero raised to a power in a denominator", f"column {exp[2] + 1}") from None
        return base

    def atom(self) -> RationalFunction:
        tok = self.take()
        kind, text, col = tok
        if kind == "num":
            return RationalFunction.constant(self.variables, int(text))
        if kind == "ident":
            nxt = self.peek()
            if nxt is not None and nxt[1] == "(":
                raise ParseError(f"function calls are not supported ({text}(...))", f"column {col + 1}")
            if text not in self.variables:
                raise ParseError(
                    f"unknown coordinate {text!r}; expected one of {', '.join(self.variables)}",
                    f"column {col + 1}",
                )
            return RationalFunction.variable(self.variables, text)
        if text == "(":
            value = self.expr()
            close = self.peek()
            if close is None or close[1] != ")":
                raise self.fail(close, "expected ')'")
            self.take()
            return value
        raise self.fail(tok, "expected a number, coordinate or '('")


def parse_expression(text: str, variables: Sequence[str]) -> RationalFunction:
    if not isinstance(text, str):
        raise ParseError(f"expression must be a string, got {type(text).__name__}")
    if re.search(r"\d\s*\.|\.\s*\d", text):
        raise ParseError("floating-point literals are not allowed; write p/q")
    return _Parser(text, variables).parse()


def parse_rational(text: str | int) -> Fraction:
    """Parse a constant such as ``"-3/4"`` or ``6`` (floats rejected)."""
    if isinstance(text, bool) or isinstance(text, float):
        raise ParseError(f"rational expected as 'p/q' string or integer, got {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ParseError(f"rational expected as 'p/q' string, got {type(text).__name__}")
    m = re.fullmatch(r"\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*", text)
    if m is None:
        raise ParseError(f"not a rational literal: {text!r}")
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise ParseError(f"zero denominator in {text!r}")
    return Fraction(int(m.group(1)), den)
