"""Expression parser for the command line.

Grammar (juxtaposition multiplies)::

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/" | <juxtaposition>) unary)*
    unary   := ("-" | "+") unary | power
    power   := postfix ("^" ["-"] INT | "^" "(" ["-"] INT ")")?
    postfix := atom STAR*
    atom    := INT | "Z" | "Zs" | "W" | "Ws" | "T" | "q" | "i" | "Delta" | "(" expr ")"

A ``*`` written directly after ``Z``/``W`` (no space) is the adjoint, so
``Z*W`` means ``Z^* W``.  After a closing parenthesis ``*`` is the adjoint
when nothing operand-like follows, e.g. ``(Z+W)*``.  Everywhere else ``*`` is
multiplication.  Negative powers and ``/`` need a unit of the localized center.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import List, NamedTuple

from .algebra import AlgebraElement, T, W, WS, Z, ZS
from .localization import DELTA, LocalElement, NotAUnit
from .scalars import I_UNIT, QScalar

__all__ = ["ParseError", "parse", "parse_algebra"]


class ParseError(ValueError):
    pass


class Token(NamedTuple):
    kind: str  # NUM, ID, OP, STAR, END
    text: str
    pos: int


_TOKEN = re.compile(r"\s*(?:(\d+)|(Delta|Zs|Ws|Z|W|T|q|i)|(\*\*|[-+*/^()]))")
_ATOMS = {
    "Z": Z, "Zs": ZS, "W": W, "Ws": WS, "T": T,
    "q": AlgebraElement.scalar(QScalar.q(1)),
    "i": AlgebraElement.scalar(I_UNIT),
}


def tokenize(text: str) -> List[Token]:
    out: List[Token] = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r} at position {pos}")
        start = m.start(m.lastindex)
        num, ident, op = m.groups()
        if num is not None:
            out.append(Token("NUM", num, start))
        elif ident is not None:
            out.append(Token("ID", ident, start))
        elif op == "**":
            out.append(Token("OP", "^", start))
        elif op == "*" and out and out[-1].kind == "ID" and out[-1].text in ("Z", "W") \
                and start == out[-1].pos + len(out[-1].text):
            out.append(Token("STAR", "*", start))
        else:
            out.append(Token("OP", op, start))
        pos = m.end()
    out.append(Token("END", "", n))
    return out


def _lift(x) -> LocalElement:
    return x if isinstance(x, LocalElement) else LocalElement(x)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def take(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind, text=None):
        t = self.take()
        if t.kind != kind or (text is not None and t.text != text):
            want = text or kind
            raise ParseError(f"expected {want!r} at position {t.pos}, found {t.text or 'end'!r}")
        return t

    def _starts_operand(self, t: Token) -> bool:
        return t.kind in ("NUM", "ID") or (t.kind == "OP" and t.text == "(")

    def parse(self) -> LocalElement:
        if self.tok.kind == "END":
            raise ParseError("empty expression")
        x = self.expr()
        if self.tok.kind != "END":
            raise ParseError(f"unexpected {self.tok.text!r} at position {self.tok.pos}")
        return x

    def expr(self):
        x = self.term()
        while self.tok.kind == "OP" and self.tok.text in "+-":
            op = self.take().text
            y = self.term()
            x = x + y if op == "+" else x - y
        return x

    def term(self):
        x = self.unary()
        while True:
            t = self.tok
            if t.kind == "OP" and t.text == "*":
                self.take()
                x = x * self.unary()
            elif t.kind == "OP" and t.text == "/":
                self.take()
                pos = self.tok.pos
                y = self.unary()
                try:
                    x = x / y
                except (NotAUnit, ZeroDivisionError) as exc:
                    raise ParseError(f"cannot divide by the expression at position {pos}: {exc}")
            elif self._starts_operand(t):
                x = x * self.unary()
            else:
                return x

    def unary(self):
        t = self.tok
        if t.kind == "OP" and t.text in "+-":
            self.take()
            x = self.unary()
            return -x if t.text == "-" else x
        return self.power()

    def _exponent(self) -> int:
        paren = self.tok.kind == "OP" and self.tok.text == "("
        if paren:
            self.take()
        sign = 1
        if self.tok.kind == "OP" and self.tok.text == "-":
            self.take()
            sign = -1
        k = sign * int(self.expect("NUM").text)
        if paren:
            self.expect("OP", ")")
        return k

    def power(self):
        x = self.postfix()
        if self.tok.kind == "OP" and self.tok.text == "^":
            pos = self.take().pos
            k = self._exponent()
            try:
                x = _lift(x) ** k
            except NotAUnit as exc:
                raise ParseError(f"negative power at position {pos} of a non-unit: {exc}")
        return x

    def postfix(self):
        x = self.atom()
        while True:
            t = self.tok
            if t.kind == "STAR":
                self.take()
                x = x.star()
            elif t.kind == "OP" and t.text == "*" and not self._starts_operand(self.toks[self.i + 1]) \
                    and self.toks[self.i + 1].text not in ("-", "+"):
                # postfix adjoint after a parenthesised group, e.g. (Z+W)*
                self.take()
                x = x.star()
            else:
                return x

    def atom(self):
        t = self.take()
        if t.kind == "NUM":
            return LocalElement(Fraction(int(t.text)))
        if t.kind == "ID":
            if t.text == "Delta":
                return DELTA
            return LocalElement(_ATOMS[t.text])
        if t.kind == "OP" and t.text == "(":
            x = self.expr()
            self.expect("OP", ")")
            return x
        raise ParseError(f"unexpected {t.text or 'end of input'!r} at position {t.pos}")


def parse(text: str) -> LocalElement:
    """Parse into the localized algebra."""
    return _Parser(text).parse()


def parse_algebra(text: str) -> AlgebraElement:
    """Parse and require an element of the unlocalized algebra."""
    x = parse(text)
    try:
        return x.to_algebra()
    except ValueError as exc:
        raise ParseError(str(exc)) from exc

