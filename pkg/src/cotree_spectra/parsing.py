"""Recursive-descent parser for cograph expressions.

Grammar (whitespace ignored)::

    expr   := term { "+" term }          disjoint union
    term   := factor { "*" factor }      join
    factor := INT                        INT isolated vertices
            | INT "(" expr ")"           INT disjoint copies of expr
            | "(" expr ")"
"""
from __future__ import annotations

from .cotree import Cotree, build

__all__ = ["ParseError", "parse_expression"]


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self) -> str:
        self._skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self):
        if not self.text.strip():
            raise ParseError("empty expression", 0)
        node = self.expr()
        if self._peek():
            raise ParseError(f"unexpected {self._peek()!r}", self.pos)
        return node

    def expr(self):
        parts = [self.term()]
        while self._peek() == "+":
            self.pos += 1
            parts.append(self.term())
        return parts[0] if len(parts) == 1 else ("U", *parts)

    def term(self):
        parts = [self.factor()]
        while self._peek() == "*":
            self.pos += 1
            parts.append(self.factor())
        return parts[0] if len(parts) == 1 else ("J", *parts)

    def factor(self):
        c = self._peek()
        if c == "(":
            return self._group()
        if c.isdigit():
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            count = int(self.text[start : self.pos])
            if count == 0:
                raise ParseError("copy count must be >= 1", start)
            if self._peek() == "(":
                inner = self._group()
            else:
                inner = "L"
            return inner if count == 1 else ("U", *([inner] * count))
        if not c:
            raise ParseError("unexpected end of expression", self.pos)
        raise ParseError(f"unexpected {c!r}", self.pos)

    def _group(self):
        open_at = self.pos
        self.pos += 1
        node = self.expr()
        if self._peek() != ")":
            raise ParseError(f"unclosed '(' opened at {open_at}", self.pos)
        self.pos += 1
        return node


def parse_expression(text: str) -> Cotree:
    """Parse a cograph expression into its minimal cotree.

    >>> parse_expression("(1+1)*(1+1)").n_leaves
    4
    """
    return build(_Parser(text).parse())
