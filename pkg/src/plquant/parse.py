"""Recursive-descent parser for expression strings.

Grammar (whitespace insensitive)::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := unary (('*'|'/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' ['-'] INT)?
    atom   := NUMBER | 'i' | NAME | FUNC '(' expr ')' | 'E[' INT ',' INT ']' | '(' expr ')'

FUNC is one of exp, cosh, sinh, cos, sin, log.  Names may contain primes
(``Jp'``).  Parsing produces a small tuple AST which is evaluated either into
an :class:`~plquant.expr.Expr` or kept as a recipe body.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import ParseError
from .expr import Expr, Space, affine_decompose

FUNCS = ("exp", "cosh", "sinh", "cos", "sin", "log")

_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d+)?)|([A-Za-z_][A-Za-z0-9_']*)|(\S))")


def tokenize(text: str) -> list[tuple[str, str]]:
    out = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            break
        num, name, sym = m.groups()
        if num is not None:
            out.append(("num", num))
        elif name is not None:
            out.append(("name", name))
        else:
            if sym not in "+-*/^()[],":
                raise ParseError(f"unexpected character {sym!r} in {text!r}")
            out.append(("sym", sym))
        pos = m.end()
    out.append(("end", ""))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.pos = 0

    def peek(self):
        return self.toks[self.pos]

    def take(self):
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def expect(self, sym):
        tok = self.take()
        if tok != ("sym", sym):
            raise ParseError(f"expected {sym!r} but found {tok[1]!r} in {self.text!r}")

    def parse(self):
        node = self.expr()
        if self.peek()[0] != "end":
            raise ParseError(f"trailing input {self.peek()[1]!r} in {self.text!r}")
        return node

    def expr(self):
        tok = self.peek()
        if tok == ("sym", "-"):
            self.take()
            node = ("neg", self.term())
        else:
            if tok == ("sym", "+"):
                self.take()
            node = self.term()
        while self.peek() in (("sym", "+"), ("sym", "-")):
            op = self.take()[1]
            rhs = self.term()
            node = ("add" if op == "+" else "sub", node, rhs)
        return node

    def term(self):
        node = self.unary()
        while self.peek() in (("sym", "*"), ("sym", "/")):
            op = self.take()[1]
            rhs = self.unary()
            node = ("mul" if op == "*" else "div", node, rhs)
        return node

    def unary(self):
        if self.peek() == ("sym", "-"):
            self.take()
            return ("neg", self.unary())
        return self.power()

    def power(self):
        node = self.atom()
        if self.peek() == ("sym", "^"):
            self.take()
            sign = 1
            if self.peek() == ("sym", "-"):
                self.take()
                sign = -1
            tok = self.take()
            if tok[0] != "num" or "." in tok[1]:
                raise ParseError(f"exponent must be an integer in {self.text!r}")
            node = ("pow", node, sign * int(tok[1]))
        return node

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return ("num", Fraction(val))
        if kind == "name":
            if val in FUNCS and self.peek() == ("sym", "("):
                self.take()
                arg = self.expr()
                self.expect(")")
                return ("call", val, arg)
            if val == "E" and self.peek() == ("sym", "["):
                self.take()
                a = self.take()
                self.expect(",")
                b = self.take()
                self.expect("]")
                if a[0] != "num" or b[0] != "num":
                    raise ParseError(f"bad entry reference in {self.text!r}")
                return ("entry", int(a[1]) - 1, int(b[1]) - 1)
            if val == "i":
                return ("i",)
            return ("name", val)
        if (kind, val) == ("sym", "("):
            node = self.expr()
            self.expect(")")
            return node
        raise ParseError(f"unexpected token {val!r} in {self.text!r}")


def parse_ast(text: str):
    if not isinstance(text, str):
        text = str(text)
    return _Parser(text).parse()


def ast_names(node) -> set[str]:
    if node[0] == "name":
        return {node[1]}
    out = set()
    for child in node[1:]:
        if isinstance(child, tuple):
            out |= ast_names(child)
    return out


def eval_expr(node, space: Space) -> Expr:
    field = space.field
    tag = node[0]
    if tag == "num":
        return space.const(field(node[1]))
    if tag == "i":
        return space.const(field.i)
    if tag == "name":
        name = node[1]
        if name in space.index:
            return space.coord(name)
        if name in field.params:
            return space.const(field.param(name))
        raise ParseError(f"undeclared name {name!r}")
    if tag == "neg":
        return -eval_expr(node[1], space)
    if tag in ("add", "sub", "mul", "div"):
        a = eval_expr(node[1], space)
        b = eval_expr(node[2], space)
        if tag == "add":
            return a + b
        if tag == "sub":
            return a - b
        if tag == "mul":
            return a * b
        if b.as_unit() is None:
            raise ParseError(f"division by a non-unit {b}")
        return a / b
    if tag == "pow":
        base = eval_expr(node[1], space)
        if node[2] < 0 and base.as_unit() is None:
            raise ParseError(f"negative power of a non-unit {base}")
        return base ** node[2]
    if tag == "call":
        fname, arg = node[1], eval_expr(node[2], space)
        dec = affine_decompose(arg)
        if fname == "log" or dec is None or not dec[1].is_zero():
            raise ParseError(f"{fname}() needs a linear form argument, got {arg}")
        lin = dec[0]
        half = field(1) / 2
        if fname == "exp":
            return space.exp(lin)
        if fname in ("cosh", "sinh"):
            sign = 1 if fname == "cosh" else -1
            return space.exp(lin, half) + space.exp(-lin, half * sign)
        ilin = lin.scale(field.i)
        if fname == "cos":
            return space.exp(ilin, half) + space.exp(-ilin, half)
        c = half / field.i
        return space.exp(ilin, c) + space.exp(-ilin, -c)
    if tag == "entry":
        raise ParseError("matrix entry references are only allowed in recipe bodies")
    raise ParseError(f"unknown node {tag}")


def parse_expr(text: str, space: Space) -> Expr:
    return eval_expr(parse_ast(text), space)


def parse_scalar(text, field):
    """Parse a parameter-only expression into a Scalar."""
    from .expr import get_space
    if isinstance(text, (int, Fraction)):
        return field(text)
    space = get_space(field.params, ())
    e = parse_expr(str(text), space)
    s = e.as_scalar()
    if s is None:
        raise ParseError(f"not a scalar: {text!r}")
    return s
