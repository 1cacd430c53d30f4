"""Immutable terms, inequalities and the structural operations on them.

Positions inside a term are tuples of 0-based child indices; the empty
tuple is the root.  Signs are the strings ``"+"`` and ``"-"``.
"""

from __future__ import annotations

from collections.abc import Callable, Iterator, Mapping
from dataclasses import dataclass
from enum import Enum
from typing import Union

from alba.syntax.signature import Connective, Pol, Signature

Path = tuple[int, ...]


@dataclass(frozen=True, slots=True)
class Var:
    name: str


@dataclass(frozen=True, slots=True)
class Nom:
    name: str


@dataclass(frozen=True, slots=True)
class CoNom:
    name: str


@dataclass(frozen=True, slots=True)
class Top:
    pass


@dataclass(frozen=True, slots=True)
class Bot:
    pass


@dataclass(frozen=True, slots=True)
class Meet:
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class Join:
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class App:
    conn: str
    args: tuple[Term, ...]


Term = Union[Var, Nom, CoNom, Top, Bot, Meet, Join, App]
Atom = Union[Var, Nom, CoNom]

TOP = Top()
BOT = Bot()


@dataclass(frozen=True, slots=True)
class Inequality:
    lhs: Term
    rhs: Term

    def __iter__(self):
        yield self.lhs
        yield self.rhs


@dataclass(frozen=True, slots=True)
class QuasiInequality:
    premises: tuple[Inequality, ...]
    conclusion: Inequality


def flip(sign: str) -> str:
    return "-" if sign == "+" else "+"


# -- structure ---------------------------------------------------------------


def children(t: Term) -> tuple[Term, ...]:
    if isinstance(t, (Meet, Join)):
        return (t.left, t.right)
    if isinstance(t, App):
        return t.args
    return ()


def rebuild(t: Term, kids: tuple[Term, ...]) -> Term:
    if isinstance(t, Meet):
        return Meet(*kids)
    if isinstance(t, Join):
        return Join(*kids)
    if isinstance(t, App):
        return App(t.conn, tuple(kids))
    return t


def is_atom(t: Term) -> bool:
    return isinstance(t, (Var, Nom, CoNom))


def subterm(t: Term, path: Path) -> Term:
    for i in path:
        kids = children(t)
        if not 0 <= i < len(kids):
            raise IndexError(f"no position {path}")
        t = kids[i]
    return t


def replace_at(t: Term, path: Path, new: Term) -> Term:
    if not path:
        return new
    kids = list(children(t))
    i = path[0]
    if not 0 <= i < len(kids):
        raise IndexError(f"no position {path}")
    kids[i] = replace_at(kids[i], path[1:], new)
    return rebuild(t, tuple(kids))


def positions(t: Term, prefix: Path = ()) -> Iterator[tuple[Path, Term]]:
    """Preorder traversal yielding ``(path, subterm)``."""
    yield prefix, t
    for i, c in enumerate(children(t)):
        yield from positions(c, prefix + (i,))


def size(t: Term) -> int:
    return 1 + sum(size(c) for c in children(t))


def depth(t: Term) -> int:
    kids = children(t)
    return 1 + max((depth(c) for c in kids), default=0)


def map_leaves(t: Term, fn: Callable[[Term], Term]) -> Term:
    kids = children(t)
    if not kids:
        return fn(t)
    return rebuild(t, tuple(map_leaves(c, fn) for c in kids))


def atoms(t: Term) -> set[Atom]:
    return {s for _, s in positions(t) if is_atom(s)}


def variables(t: Term) -> set[str]:
    return {s.name for _, s in positions(t) if isinstance(s, Var)}


def connectives(t: Term) -> set[str]:
    return {s.conn for _, s in positions(t) if isinstance(s, App)}


def is_pure(t: Term) -> bool:
    """A term is pure when it contains no propositional variable."""
    return not any(isinstance(s, Var) for _, s in positions(t))


def ineq_atoms(ineq: Inequality) -> set[Atom]:
    return atoms(ineq.lhs) | atoms(ineq.rhs)


def ineq_variables(ineq: Inequality) -> set[str]:
    return variables(ineq.lhs) | variables(ineq.rhs)


def quasi_atoms(q: QuasiInequality) -> set[Atom]:
    out = ineq_atoms(q.conclusion)
    for p in q.premises:
        out |= ineq_atoms(p)
    return out


def atom_key(a: Atom) -> tuple[int, str]:
    """Sort key: variables, then nominals, then conominals; then by name."""
    rank = 0 if isinstance(a, Var) else 1 if isinstance(a, Nom) else 2
    return rank, a.name


def in_base_language(t: Term, sig: Signature) -> bool:
    for _, s in positions(t):
        if isinstance(s, (Nom, CoNom)):
            return False
        if isinstance(s, App) and (s.conn not in sig or not sig[s.conn].is_base):
            return False
    return True


# -- substitution ------------------------------------------------------------


def substitute(t: Term, mapping: Mapping[Atom, Term]) -> Term:
    """Simultaneously replace atoms according to ``mapping``."""
    if not mapping:
        return t
    return map_leaves(t, lambda leaf: mapping.get(leaf, leaf) if is_atom(leaf) else leaf)


def substitute_var(t: Term, name: str, value: Term) -> Term:
    return substitute(t, {Var(name): value})


def substitute_ineq(ineq: Inequality, mapping: Mapping[Atom, Term]) -> Inequality:
    return Inequality(substitute(ineq.lhs, mapping), substitute(ineq.rhs, mapping))


# -- signs and polarity ------------------------------------------------------


def child_signs(t: Term, sign: str, sig: Signature) -> tuple[str, ...]:
    """Signs of the children of ``t`` when ``t`` carries ``sign``."""
    if isinstance(t, (Meet, Join)):
        return (sign, sign)
    if isinstance(t, App):
        conn = sig[t.conn]
        return tuple(sign if p is Pol.ONE else flip(sign) for p in conn.order_type)
    return ()


def signed_positions(t: Term, sign: str, sig: Signature, prefix: Path = ()) -> Iterator[tuple[Path, str, Term]]:
    yield prefix, sign, t
    for i, (c, s) in enumerate(zip(children(t), child_signs(t, sign, sig))):
        yield from signed_positions(c, s, sig, prefix + (i,))


class Polarity(Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    BOTH = "both"
    ABSENT = "absent"

    @classmethod
    def of(cls, signs: set[str]) -> Polarity:
        if not signs:
            return cls.ABSENT
        if signs == {"+"}:
            return cls.POSITIVE
        if signs == {"-"}:
            return cls.NEGATIVE
        return cls.BOTH


def occurrence_signs(t: Term, atom: Atom, sig: Signature, sign: str = "+") -> set[str]:
    return {s for _, s, u in signed_positions(t, sign, sig) if u == atom}


def polarity(t: Term, v: str | Atom, sig: Signature) -> Polarity:
    atom = Var(v) if isinstance(v, str) else v
    return Polarity.of(occurrence_signs(t, atom, sig))


def positive_in(t: Term, v: str | Atom, sig: Signature) -> bool:
    """True when every occurrence is positive (vacuously if absent)."""
    return polarity(t, v, sig) in (Polarity.POSITIVE, Polarity.ABSENT)


def negative_in(t: Term, v: str | Atom, sig: Signature) -> bool:
    return polarity(t, v, sig) in (Polarity.NEGATIVE, Polarity.ABSENT)


# -- syntactic closedness ----------------------------------------------------


def _constrained(s: Term, sig: Signature) -> str | None:
    """Which sign a symbol must carry inside a syntactically closed term."""
    if isinstance(s, Nom):
        return "+"
    if isinstance(s, CoNom):
        return "-"
    if isinstance(s, App):
        conn: Connective = sig[s.conn]
        if conn.origin.kind in ("residual", "adjoint"):
            return "+" if conn.is_f else "-"
    return None


def syntactically_closed(t: Term, sig: Signature) -> bool:
    """Nominals and new F-connectives occur only positively; conominals and new
    G-connectives only negatively.  Normalizations are unconstrained."""
    for _, sign, s in signed_positions(t, "+", sig):
        want = _constrained(s, sig)
        if want is not None and sign != want:
            return False
    return True


def syntactically_open(t: Term, sig: Signature) -> bool:
    for _, sign, s in signed_positions(t, "+", sig):
        want = _constrained(s, sig)
        if want is not None and sign == want:
            return False
    return True


# -- renaming and duality ----------------------------------------------------


def alpha_equivalent(a: QuasiInequality | Inequality, b: QuasiInequality | Inequality) -> bool:
    """Equality up to a bijective renaming of nominals and conominals.

    Premises are compared as a set.
    """
    if isinstance(a, Inequality):
        a = QuasiInequality((), a)
    if isinstance(b, Inequality):
        b = QuasiInequality((), b)
    if len(a.premises) != len(b.premises):
        return False
    return _canonical(a) == _canonical(b)


def _canonical(q: QuasiInequality) -> tuple:
    """Rename nominals in first-occurrence order, trying premise orders greedily."""
    from itertools import permutations

    prem = list(q.premises)
    best = None
    orders = permutations(prem) if len(prem) <= 6 else [tuple(sorted(prem, key=repr))]
    for order in orders:
        seen: dict[Atom, Atom] = {}

        def rename(leaf: Term) -> Term:
            if isinstance(leaf, (Nom, CoNom)):
                if leaf not in seen:
                    k = sum(1 for x in seen if type(x) is type(leaf))
                    seen[leaf] = type(leaf)(f"_{k}")
                return seen[leaf]
            return leaf

        parts = [q.conclusion, *order]
        renamed = tuple(
            (repr(map_leaves(p.lhs, rename)), repr(map_leaves(p.rhs, rename))) for p in parts
        )
        key = (renamed[0], tuple(sorted(renamed[1:])))
        if best is None or key < best:
            best = key
    return best


def dual_term(t: Term) -> Term:
    """Order-dual reading: swap meet/join and top/bottom, nominals/conominals."""
    if isinstance(t, Top):
        return BOT
    if isinstance(t, Bot):
        return TOP
    if isinstance(t, Nom):
        return CoNom(t.name)
    if isinstance(t, CoNom):
        return Nom(t.name)
    if isinstance(t, Meet):
        return Join(dual_term(t.left), dual_term(t.right))
    if isinstance(t, Join):
        return Meet(dual_term(t.left), dual_term(t.right))
    if isinstance(t, App):
        return App(t.conn, tuple(dual_term(a) for a in t.args))
    return t


def dual_inequality(ineq: Inequality) -> Inequality:
    return Inequality(dual_term(ineq.rhs), dual_term(ineq.lhs))
