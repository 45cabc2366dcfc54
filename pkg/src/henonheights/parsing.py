"""Recursive-descent parser for polynomial expressions in x, y and the parameter.

Grammar (whitespace is ignored)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/")? unary)*      juxtaposition multiplies
    unary  := ("+" | "-") unary | power
    power  := atom (("^" | "**") unary)?        right associative
    atom   := NUMBER | NAME | "(" expr ")"

NUMBER is a decimal literal (``3``, ``0.25``); it is converted exactly.
NAME is ``x``, ``y`` or the parameter (``t`` by default, ``λ`` and ``lambda``
are accepted as aliases).  Exponents must evaluate to non-negative integer
constants and divisors must be nonzero and free of x and y.
"""

import re
from fractions import Fraction

from .bivariate import BivarPoly
from .errors import ParseError
from .ratfunc import RatFunc

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?|\.\d+)|(?P<name>[A-Za-z_λ][A-Za-z_0-9λ]*)|(?P<op>\*\*|[-+*/^()]))"
)

_PARAM_ALIASES = ("λ", "lambda")


class _Parser:
    def __init__(self, text, param):
        self.text = text
        self.param = param
        self.tokens = self._tokenize(text)
        self.i = 0

    def _tokenize(self, text):
        toks = []
        pos = 0
        n = len(text)
        while pos < n:
            if text[pos].isspace():
                pos += 1
                continue
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
            kind = m.lastgroup
            start = m.start(kind)
            toks.append((kind, m.group(kind), start))
            pos = m.end()
        toks.append(("end", "", n))
        return toks

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, self.text, tok[2])

    def parse(self):
        if self.peek()[0] == "end":
            self.fail("empty expression")
        value = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"unexpected token {self.peek()[1]!r}")
        return value

    def expr(self):
        value = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def _starts_atom(self, tok):
        return tok[0] in ("num", "name") or (tok[0] == "op" and tok[1] == "(")

    def term(self):
        value = self.unary()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] == "*":
                self.take()
                value = value * self.unary()
            elif tok[0] == "op" and tok[1] == "/":
                self.take()
                dtok = self.peek()
                div = self.unary()
                if not div.is_constant():
                    self.fail("division by an expression involving x or y", dtok)
                c = div.constant_term()
                if not c:
                    self.fail("division by zero", dtok)
                value = value * c.inverse()
            elif self._starts_atom(tok):
                value = value * self.power()
            else:
                return value

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] in ("+", "-"):
            self.take()
            v = self.unary()
            return v if tok[1] == "+" else -v
        return self.power()

    def power(self):
        base = self.atom()
        tok = self.peek()
        if tok[0] == "op" and tok[1] in ("^", "**"):
            self.take()
            etok = self.peek()
            e = self.unary()
            if not e.is_constant() or not e.constant_term().is_constant():
                self.fail("exponent must be a constant", etok)
            ev = e.constant_term().constant_value()
            if ev.denominator != 1 or ev < 0:
                self.fail("exponent must be a non-negative integer", etok)
            return base ** int(ev)
        return base

    def atom(self):
        tok = self.take()
        kind, val, _ = tok
        if kind == "num":
            return BivarPoly.const(Fraction(val))
        if kind == "name":
            if val == "x":
                return BivarPoly.x()
            if val == "y":
                return BivarPoly.y()
            if val == self.param or val in _PARAM_ALIASES:
                return BivarPoly.const(RatFunc.gen())
            raise ParseError(f"unknown variable {val!r}", self.text, tok[2])
        if kind == "op" and val == "(":
            inner = self.expr()
            close = self.peek()
            if not (close[0] == "op" and close[1] == ")"):
                self.fail("expected ')'")
            self.take()
            return inner
        if kind == "end":
            raise ParseError("unexpected end of expression", self.text, tok[2])
        raise ParseError(f"unexpected token {val!r}", self.text, tok[2])


def parse_bivariate(text, param="t"):
    if not isinstance(text, str):
        raise ParseError("expression must be a string", str(text), 0)
    return _Parser(text, param).parse()


def parse_ratfunc(text, param="t"):
    """Parse an expression that must not involve x or y."""
    p = parse_bivariate(text, param)
    if not p.is_constant():
        raise ParseError("expected an expression in the parameter only", text, 0)
    return p.constant_term()


def parse_poly_in_y(text, param="t"):
    """Parse a polynomial in y; returns coefficient list (lowest power first)."""
    p = parse_bivariate(text, param)
    if p.deg_x > 0:
        raise ParseError("expected a polynomial in y only", text, 0)
    if not p:
        return []
    return [p.coefficient(0, j) for j in range(p.deg_y + 1)]
