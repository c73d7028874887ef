"""AST and parser for the toy loop language.

    program := stmt*
    stmt    := ID ":=" rhs ";" | ID ":=" "?" ";" | "skip" ";"
             | "if" "(" cond ")" block ["else" block]
             | "while" "(" cond ")" block
             | "assume" "(" cond ")" ";"
    rhs     := INT | ["-"] ID [("+"|"-") INT]
    cond    := lin ("<=" | ">=") INT | "true" | "?"
    lin     := ["-"] ID [("+"|"-") ID]

``//`` starts a comment that runs to the end of the line.  INT may carry a
leading minus sign wherever it appears.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union


class ParseError(SyntaxError):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {msg}")
        self.line = line
        self.col = col


# ---------------------------------------------------------------- AST

@dataclass(frozen=True)
class Lin:
    """``sum(coef * var) <= c`` with at most two terms."""

    terms: tuple[tuple[int, str], ...]
    c: int

    def __str__(self) -> str:
        text = ""
        for n, (a, v) in enumerate(self.terms):
            if n == 0:
                text = ("-" if a < 0 else "") + v
            else:
                text += (" - " if a < 0 else " + ") + v
        return f"{text} <= {self.c}"


@dataclass(frozen=True)
class TrueCond:
    def __str__(self) -> str:
        return "true"


@dataclass(frozen=True)
class FalseCond:
    def __str__(self) -> str:
        return "false"


@dataclass(frozen=True)
class Nondet:
    def __str__(self) -> str:
        return "?"


Cond = Union[Lin, TrueCond, FalseCond, Nondet]


def negate(cond: Cond) -> Cond:
    """Complement over the integers: not(e <= c) is e >= c + 1."""
    if isinstance(cond, Lin):
        return Lin(tuple((-a, v) for a, v in cond.terms), -cond.c - 1)
    if isinstance(cond, TrueCond):
        return FalseCond()
    if isinstance(cond, FalseCond):
        return TrueCond()
    return cond


@dataclass(frozen=True)
class Skip:
    pass


@dataclass(frozen=True)
class AssignConst:
    target: str
    c: int


@dataclass(frozen=True)
class AssignVar:
    """``target := sign * source + c`` with sign in {+1, -1}."""

    target: str
    sign: int
    source: str
    c: int


@dataclass(frozen=True)
class Havoc:
    target: str


@dataclass(frozen=True)
class Assume:
    cond: Cond


@dataclass(frozen=True)
class If:
    cond: Cond
    then: tuple
    orelse: tuple


@dataclass(frozen=True)
class While:
    cond: Cond
    body: tuple
    line: int = 0


Stmt = Union[Skip, AssignConst, AssignVar, Havoc, Assume, If, While]


@dataclass(frozen=True)
class Program:
    body: tuple
    variables: tuple[str, ...]
    source: str = ""


# ---------------------------------------------------------------- lexer

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+) | (?P<nl>\n) | (?P<comment>//[^\n]*)
  | (?P<int>\d+) | (?P<id>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>:=|<=|>=|[-+;(){}?])
""", re.VERBOSE)

KEYWORDS = {"if", "else", "while", "assume", "true", "skip"}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos, line, start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            start = m.end()
        elif kind not in ("ws", "comment"):
            tok = m.group()
            if kind == "id" and tok in KEYWORDS:
                kind = "kw"
            out.append(Token(kind, tok, line, pos - start + 1))
        pos = m.end()
    out.append(Token("eof", "", line, pos - start + 1))
    return out


# ---------------------------------------------------------------- parser

class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.pos = 0
        self.vars: dict[str, None] = {}

    @property
    def tok(self) -> Token:
        return self.toks[self.pos]

    def error(self, msg: str):
        t = self.tok
        found = t.text or "end of input"
        raise ParseError(f"{msg}, found {found!r}", t.line, t.col)

    def accept(self, text: str) -> bool:
        if self.tok.text == text and self.tok.kind in ("op", "kw"):
            self.pos += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        t = self.tok
        if not self.accept(text):
            self.error(f"expected {text!r}")
        return t

    def ident(self) -> str:
        t = self.tok
        if t.kind != "id":
            self.error("expected a variable")
        self.pos += 1
        self.vars.setdefault(t.text, None)
        return t.text

    def integer(self) -> int:
        neg = self.accept("-")
        t = self.tok
        if t.kind != "int":
            self.error("expected an integer")
        self.pos += 1
        return -int(t.text) if neg else int(t.text)

    def program(self) -> tuple:
        body = []
        while self.tok.kind != "eof":
            body.append(self.stmt())
        return tuple(body)

    def block(self) -> tuple:
        self.expect("{")
        body = []
        while not self.accept("}"):
            if self.tok.kind == "eof":
                self.error("expected '}'")
            body.append(self.stmt())
        return tuple(body)

    def stmt(self) -> Stmt:
        t = self.tok
        if self.accept("skip"):
            self.expect(";")
            return Skip()
        if self.accept("if"):
            cond = self.paren_cond()
            then = self.block()
            orelse = self.block() if self.accept("else") else ()
            return If(cond, then, orelse)
        if self.accept("while"):
            cond = self.paren_cond()
            return While(cond, self.block(), t.line)
        if self.accept("assume"):
            cond = self.paren_cond()
            self.expect(";")
            return Assume(cond)
        if t.kind == "id":
            target = self.ident()
            self.expect(":=")
            stmt = self.rhs(target)
            self.expect(";")
            return stmt
        self.error("expected a statement")

    def rhs(self, target: str) -> Stmt:
        if self.accept("?"):
            return Havoc(target)
        if self.tok.kind == "int" or (self.tok.text == "-" and self.toks[self.pos + 1].kind == "int"):
            return AssignConst(target, self.integer())
        sign = -1 if self.accept("-") else 1
        source = self.ident()
        c = 0
        if self.tok.text in ("+", "-"):
            neg = self.tok.text == "-"
            self.pos += 1
            c = self.integer()
            c = -c if neg else c
        return AssignVar(target, sign, source, c)

    def paren_cond(self) -> Cond:
        self.expect("(")
        cond = self.cond()
        self.expect(")")
        return cond

    def cond(self) -> Cond:
        if self.accept("true"):
            return TrueCond()
        if self.accept("?"):
            return Nondet()
        terms = [(-1 if self.accept("-") else 1, self.ident())]
        if self.tok.text in ("+", "-") and self.toks[self.pos + 1].kind == "id":
            a = 1 if self.tok.text == "+" else -1
            self.pos += 1
            terms.append((a, self.ident()))
        if self.accept("<="):
            return Lin(tuple(terms), self.integer())
        if self.accept(">="):
            return Lin(tuple((-a, v) for a, v in terms), -self.integer())
        self.error("expected '<=' or '>='")


def parse(text: str) -> Program:
    p = _Parser(text)
    body = p.program()
    return Program(body, tuple(p.vars), text)
