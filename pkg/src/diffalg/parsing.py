"""Shared expression grammar for field elements and differential rationals.

Syntax: identifiers; ``+ - * / ^``; integer (and thereby rational, via
``/``) literals; derivative application ``d[dt](x)``, iterated
``d[dt]^2(x)`` and mixed ``d[dt](d[dw](x))``.  Exponents are nonnegative
integer literals and bind tighter than unary minus.

Parsing builds a small AST which is then evaluated against a *scope*, an
object with ``resolve(name)``, ``derive(derivation_name, value)`` and
``const(int)``.  The same grammar therefore serves the coefficient field,
differential polynomial rings and the session file format.
"""

from __future__ import annotations

import re

from .errors import ParseError

_TOKEN = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()\[\],]))"
)


class Token:
    __slots__ = ("kind", "value", "column")

    def __init__(self, kind, value, column):
        self.kind = kind
        self.value = value
        self.column = column


def tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            col = len(text) - len(stripped) + 1
            raise ParseError(f"unexpected character {stripped[0]!r}", column=col)
        if m.group("int") is not None:
            tokens.append(Token("int", int(m.group("int")), m.start("int") + 1))
        elif m.group("ident") is not None:
            tokens.append(Token("ident", m.group("ident"), m.start("ident") + 1))
        else:
            tokens.append(Token("op", m.group("op"), m.start("op") + 1))
        pos = m.end()
    tokens.append(Token("end", None, len(text) + 1))
    return tokens


class Node:
    __slots__ = ()


class Num(Node):
    __slots__ = ("value",)

    def __init__(self, value):
        self.value = value

    def evaluate(self, scope):
        return scope.const(self.value)


class Name(Node):
    __slots__ = ("name",)

    def __init__(self, name):
        self.name = name

    def evaluate(self, scope):
        return scope.resolve(self.name)


class Unary(Node):
    __slots__ = ("arg",)

    def __init__(self, arg):
        self.arg = arg

    def evaluate(self, scope):
        return -self.arg.evaluate(scope)


class Bin(Node):
    __slots__ = ("op", "left", "right")

    def __init__(self, op, left, right):
        self.op = op
        self.left = left
        self.right = right

    def evaluate(self, scope):
        a = self.left.evaluate(scope)
        b = self.right.evaluate(scope)
        if self.op == "+":
            return a + b
        if self.op == "-":
            return a - b
        if self.op == "*":
            return a * b
        return a / b


class Pow(Node):
    __slots__ = ("base", "exp")

    def __init__(self, base, exp):
        self.base = base
        self.exp = exp

    def evaluate(self, scope):
        return self.base.evaluate(scope) ** self.exp


class DApp(Node):
    __slots__ = ("derivation", "power", "arg")

    def __init__(self, derivation, power, arg):
        self.derivation = derivation
        self.power = power
        self.arg = arg

    def evaluate(self, scope):
        value = self.arg.evaluate(scope)
        for _ in range(self.power):
            value = scope.derive(self.derivation, value)
        return value


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op):
        tok = self.next()
        if tok.kind != "op" or tok.value != op:
            raise ParseError(f"expected {op!r}", column=tok.column)
        return tok

    def parse(self):
        node = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise ParseError(f"unexpected trailing input {tok.value!r}", column=tok.column)
        return node

    def expr(self):
        node = self.term()
        while True:
            tok = self.peek()
            if tok.kind == "op" and tok.value in "+-":
                self.next()
                node = Bin(tok.value, node, self.term())
            else:
                return node

    def term(self):
        node = self.factor()
        while True:
            tok = self.peek()
            if tok.kind == "op" and tok.value in "*/":
                self.next()
                node = Bin(tok.value, node, self.factor())
            else:
                return node

    def factor(self):
        tok = self.peek()
        if tok.kind == "op" and tok.value == "-":
            self.next()
            return Unary(self.factor())
        if tok.kind == "op" and tok.value == "+":
            self.next()
            return self.factor()
        return self.power()

    def power(self):
        base = self.atom()
        tok = self.peek()
        if tok.kind == "op" and tok.value == "^":
            self.next()
            return Pow(base, self.exponent())
        return base

    def exponent(self):
        tok = self.next()
        if tok.kind != "int":
            raise ParseError("exponent must be a nonnegative integer literal", column=tok.column)
        return tok.value

    def atom(self):
        tok = self.next()
        if tok.kind == "int":
            return Num(tok.value)
        if tok.kind == "ident":
            if tok.value == "d" and self._at_op("["):
                return self.dapp()
            return Name(tok.value)
        if tok.kind == "op" and tok.value == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        raise ParseError(
            "expected a number, name, parenthesis or derivative application",
            column=tok.column,
        )

    def _at_op(self, op):
        tok = self.peek()
        return tok.kind == "op" and tok.value == op

    def dapp(self):
        self.expect_op("[")
        tok = self.next()
        if tok.kind != "ident":
            raise ParseError("expected a derivation name inside d[...]", column=tok.column)
        dname = tok.value
        self.expect_op("]")
        power = 1
        if self._at_op("^"):
            self.next()
            power = self.exponent()
        self.expect_op("(")
        arg = self.expr()
        self.expect_op(")")
        return DApp(dname, power, arg)


def parse_expression(text):
    return _Parser(tokenize(text)).parse()


def split_tuple(text):
    """Split on top-level commas, respecting parentheses and brackets."""
    parts = []
    depth = 0
    start = 0
    for i, ch in enumerate(text):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
            if depth < 0:
                raise ParseError("unbalanced bracket", column=i + 1)
        elif ch == "," and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    if depth != 0:
        raise ParseError("unbalanced bracket", column=len(text))
    parts.append(text[start:])
    return [p.strip() for p in parts]
