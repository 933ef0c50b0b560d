"""Parser for Rota-Baxter word expressions.

Grammar::

    expr    := ['-'] product (('+' | '-') product)*
    product := term ('.' term)*
    term    := [coef '*'] word | '0'
    coef    := INT ['/' INT]
    word    := atom+
    atom    := (gen | '[' expr ']') ['^*']
    gen     := IDENT (WS IDENT)*        # tensor word, only over T(V)

Identifiers are ``[a-zA-Z][a-zA-Z0-9_]*``.  ``.`` is the product of the free
Rota-Baxter algebra, ``[x]`` applies R, and ``^*`` applies the involution to
the atom it follows.  Whitespace is insignificant except between identifiers,
where it joins symbols into one tensor word (T(V)) or is rejected as two
adjacent generators (structure-constant base).
"""

from __future__ import annotations

import re
from fractions import Fraction

from .freerb import FreeRBElement, FreeRotaBaxter, WordError

_TOKEN = re.compile(
    r"(?P<ws>\s+)|(?P<ident>[a-zA-Z][a-zA-Z0-9_]*)|(?P<int>[0-9]+)|(?P<star>\^\*)|(?P<op>[\[\]+\-*/.])"
)


class ParseError(ValueError):
    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        pointer = f"\n  {text}\n  {' ' * position}^" if text else ""
        super().__init__(f"{message} at position {position}{pointer}")


def tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        value = m.group()
        if kind == "op":
            kind = value
        elif kind == "star":
            kind = "^*"
        tokens.append((kind, value, pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, fr: FreeRotaBaxter):
        self.text = text
        self.fr = fr
        self.tokens = tokenize(text)
        self.k = 0

    def peek(self, skip_ws: bool = True):
        k = self.k
        while skip_ws and self.tokens[k][0] == "ws":
            k += 1
        return self.tokens[k]

    def take(self, skip_ws: bool = True):
        while skip_ws and self.tokens[self.k][0] == "ws":
            self.k += 1
        tok = self.tokens[self.k]
        self.k += 1
        return tok

    def expect(self, kind: str):
        tok = self.take()
        if tok[0] != kind:
            found = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ParseError(f"expected {kind!r}, found {found}", tok[2], self.text)
        return tok

    def error(self, message: str, tok):
        raise ParseError(message, tok[2], self.text)

    def parse(self) -> FreeRBElement:
        out = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            self.error(f"unexpected {tok[1]!r}", tok)
        return out

    def expr(self) -> FreeRBElement:
        negate = False
        if self.peek()[0] == "-":
            self.take()
            negate = True
        total = self.product()
        if negate:
            total = -total
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            term = self.product()
            total = total + term if op == "+" else total - term
        return total

    def product(self) -> FreeRBElement:
        out = self.term()
        while self.peek()[0] == ".":
            self.take()
            out = self.fr.product(out, self.term())
        return out

    def term(self) -> FreeRBElement:
        tok = self.peek()
        coeff = Fraction(1)
        if tok[0] == "int":
            num = int(self.take()[1])
            den = 1
            if self.peek()[0] == "/":
                self.take()
                den_tok = self.expect("int")
                den = int(den_tok[1])
                if den == 0:
                    self.error("zero denominator", den_tok)
            coeff = Fraction(num, den)
            if self.peek()[0] != "*":
                if coeff == 0 and self.peek()[0] in ("end", "+", "-", "]", "."):
                    return FreeRBElement()
                self.error("expected '*' after coefficient", self.peek())
            self.take()
        return coeff * self.word()

    def word(self) -> FreeRBElement:
        start = self.peek()
        if start[0] not in ("ident", "["):
            found = "end of input" if start[0] == "end" else repr(start[1])
            self.error(f"expected a generator or '[', found {found}", start)
        out = None
        prev_kind = None
        while self.peek()[0] in ("ident", "["):
            tok = self.peek()
            if tok[0] == "ident":
                atom, kind = self.generator(), "gen"
            else:
                atom, kind = self.bracket(), "bracket"
            if self.peek(skip_ws=False)[0] == "^*":
                self.take(skip_ws=False)
                atom = self.fr.star(atom)
            if prev_kind == kind and not (kind == "gen" and self.fr.base.merges_adjacent):
                what = "generators" if kind == "gen" else "brackets"
                self.error(f"adjacent {what} do not form a Rota-Baxter word", tok)
            merge = prev_kind == kind == "gen"
            prev_kind = kind
            out = atom if out is None else _concat(out, atom, merge)
        return out

    def generator(self) -> FreeRBElement:
        symbols = [self.take()[1]]
        while True:
            k = self.k
            if self.tokens[k][0] == "ws" and self.tokens[k + 1][0] == "ident":
                if not self.fr.base.merges_adjacent:
                    self.error("adjacent generators do not form a Rota-Baxter word", self.tokens[k + 1])
                self.k += 1
                symbols.append(self.take(skip_ws=False)[1])
            else:
                break
        gen = tuple(symbols)
        try:
            self.fr.base.check_generator(gen)
        except WordError as exc:
            raise ParseError(str(exc), self.tokens[self.k - 1][2], self.text) from None
        return FreeRBElement({(gen,): 1})

    def bracket(self) -> FreeRBElement:
        self.expect("[")
        inner = self.expr()
        self.expect("]")
        return self.fr.rb(inner)


def _concat(x: FreeRBElement, y: FreeRBElement, merge: bool) -> FreeRBElement:
    acc: dict = {}
    for wx, cx in x.items():
        for wy, cy in y.items():
            w = wx[:-1] + (wx[-1] + wy[0],) + wy[1:] if merge else wx + wy
            acc[w] = acc.get(w, 0) + cx * cy
    return FreeRBElement(acc)


def parse_expression(text: str, fr: FreeRotaBaxter | None = None) -> FreeRBElement:
    """Parse ``text`` into an element of the free Rota-Baxter algebra ``fr``."""
    return _Parser(text, fr or FreeRotaBaxter()).parse()


def parse_word(text: str, fr: FreeRotaBaxter | None = None) -> tuple:
    """Parse a single word with coefficient 1."""
    x = parse_expression(text, fr)
    if len(x) != 1 or next(iter(x.values())) != 1:
        raise ParseError("expected a single Rota-Baxter word", 0, text)
    return next(iter(x))


__all__ = ["ParseError", "parse_expression", "parse_word", "tokenize"]
