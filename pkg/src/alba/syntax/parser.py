"""Concrete syntax: lexer, recursive-descent parser and printer.

Grammar (loosest to tightest)::

    ineq    := term "<=" term
    term    := conj ("\\/" conj)*
    conj    := unit ("/\\" unit)*
    unit    := primary [INFIX primary]
    primary := "top" | "bot" | "#" ident | "@" ident | ident
             | CONN "(" [term ("," term)*] ")" | "(" term ")"

``INFIX`` is any binary connective whose name does not start with a letter
or underscore; infix application is non-associative.  Connective names are
matched longest-first against the signature, so ``->b1`` lexes as a single
token when the signature contains it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from alba.errors import ArityMismatch, TermSyntaxError, UnknownConnective
from alba.syntax.signature import Signature
from alba.syntax.terms import (
    App,
    Bot,
    CoNom,
    Inequality,
    Join,
    Meet,
    Nom,
    QuasiInequality,
    Term,
    Top,
    Var,
    atom_key,
    quasi_atoms,
)

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")
_PUNCT = ("<=", "/\\", "\\/", "(", ")", ",")


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT NOM CONOM CONN PUNCT END
    text: str
    pos: int


def tokenize(text: str, sig: Signature) -> list[Token]:
    names = sorted(sig, key=len, reverse=True)
    out: list[Token] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "#@":
            m = _IDENT.match(text, i + 1)
            if not m:
                raise TermSyntaxError(f"expected a name after {ch!r}", i)
            out.append(Token("NOM" if ch == "#" else "CONOM", m.group(), i))
            i = m.end()
            continue
        conn = next((n for n in names if text.startswith(n, i)), None)
        m = _IDENT.match(text, i)
        ident_len = m.end() - i if m else 0
        punct = next((p for p in _PUNCT if text.startswith(p, i)), None)
        best = max(len(conn) if conn else 0, ident_len, len(punct) if punct else 0)
        if best == 0:
            raise TermSyntaxError(f"unexpected character {ch!r}", i)
        # ties go to the connective
        if conn and len(conn) == best:
            out.append(Token("CONN", conn, i))
        elif punct and len(punct) == best:
            out.append(Token("PUNCT", punct, i))
        else:
            out.append(Token("IDENT", m.group(), i))
        i += best
    out.append(Token("END", "", len(text)))
    return out


def is_infix_name(name: str) -> bool:
    return not (name[0].isalpha() or name[0] == "_")


class _Parser:
    def __init__(self, text: str, sig: Signature):
        self.sig = sig
        self.toks = tokenize(text, sig)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def eat(self, kind: str, text: str | None = None) -> Token:
        t = self.tok
        if t.kind != kind or (text is not None and t.text != text):
            want = text or kind
            got = t.text or "end of input"
            raise TermSyntaxError(f"expected {want!r}, got {got!r}", t.pos)
        self.i += 1
        return t

    def at(self, kind: str, text: str | None = None) -> bool:
        t = self.tok
        return t.kind == kind and (text is None or t.text == text)

    def term(self) -> Term:
        t = self.conj()
        while self.at("PUNCT", "\\/"):
            self.i += 1
            t = Join(t, self.conj())
        return t

    def conj(self) -> Term:
        t = self.unit()
        while self.at("PUNCT", "/\\"):
            self.i += 1
            t = Meet(t, self.unit())
        return t

    def unit(self) -> Term:
        left = self.primary()
        if self.at("CONN") and is_infix_name(self.tok.text):
            tok = self.eat("CONN")
            conn = self.sig[tok.text]
            if conn.arity != 2:
                raise ArityMismatch(f"{tok.text} used infix but has arity {conn.arity}", tok.pos)
            right = self.primary()
            if self.at("CONN") and is_infix_name(self.tok.text):
                raise TermSyntaxError("infix connectives do not associate; add parentheses", self.tok.pos)
            return App(tok.text, (left, right))
        return left

    def primary(self) -> Term:
        t = self.tok
        if t.kind == "NOM":
            self.i += 1
            return Nom(t.text)
        if t.kind == "CONOM":
            self.i += 1
            return CoNom(t.text)
        if t.kind == "PUNCT" and t.text == "(":
            self.i += 1
            inner = self.term()
            self.eat("PUNCT", ")")
            return inner
        if t.kind == "IDENT":
            self.i += 1
            if self.at("PUNCT", "("):
                raise UnknownConnective(f"unknown connective {t.text!r}", t.pos)
            if t.text == "top":
                return Top()
            if t.text == "bot":
                return Bot()
            return Var(t.text)
        if t.kind == "CONN":
            self.i += 1
            conn = self.sig[t.text]
            self.eat("PUNCT", "(")
            args: list[Term] = []
            if not self.at("PUNCT", ")"):
                args.append(self.term())
                while self.at("PUNCT", ","):
                    self.i += 1
                    args.append(self.term())
            self.eat("PUNCT", ")")
            if len(args) != conn.arity:
                raise ArityMismatch(f"{t.text} expects {conn.arity} arguments, got {len(args)}", t.pos)
            return App(t.text, tuple(args))
        raise TermSyntaxError(f"unexpected {t.text or 'end of input'!r}", t.pos)


def parse_term(text: str, sig: Signature) -> Term:
    p = _Parser(text, sig)
    t = p.term()
    p.eat("END")
    return t


def parse_inequality(text: str, sig: Signature) -> Inequality:
    p = _Parser(text, sig)
    lhs = p.term()
    p.eat("PUNCT", "<=")
    rhs = p.term()
    p.eat("END")
    return Inequality(lhs, rhs)


# -- printing ----------------------------------------------------------------

_JOIN, _MEET, _INFIX, _ATOM = 1, 2, 3, 4


def _level(t: Term) -> int:
    if isinstance(t, Join):
        return _JOIN
    if isinstance(t, Meet):
        return _MEET
    if isinstance(t, App) and len(t.args) == 2 and is_infix_name(t.conn):
        return _INFIX
    return _ATOM


def _fmt(t: Term, need: int) -> str:
    s = _render(t)
    return f"({s})" if _level(t) < need else s


def _render(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Nom):
        return f"#{t.name}"
    if isinstance(t, CoNom):
        return f"@{t.name}"
    if isinstance(t, Top):
        return "top"
    if isinstance(t, Bot):
        return "bot"
    if isinstance(t, Join):
        return f"{_fmt(t.left, _JOIN)} \\/ {_fmt(t.right, _MEET)}"
    if isinstance(t, Meet):
        return f"{_fmt(t.left, _MEET)} /\\ {_fmt(t.right, _INFIX)}"
    if _level(t) == _INFIX:
        return f"{_fmt(t.args[0], _ATOM)} {t.conn} {_fmt(t.args[1], _ATOM)}"
    return f"{t.conn}({', '.join(_fmt(a, _JOIN) for a in t.args)})"


def format_term(t: Term) -> str:
    return _render(t)


def format_inequality(ineq: Inequality) -> str:
    return f"{format_term(ineq.lhs)} <= {format_term(ineq.rhs)}"


def format_atom(a) -> str:
    return format_term(a)


def format_quasi(q: QuasiInequality) -> str:
    bound = sorted(quasi_atoms(q), key=atom_key)
    parts = ["FORALL", *(format_atom(a) for a in bound), ":"]
    if q.premises:
        parts.append(" & ".join(format_inequality(p) for p in q.premises))
    parts += ["=>", format_inequality(q.conclusion)]
    return " ".join(parts)
