"""Random signatures and random inductive inequalities.

Inequalities are grown around a random certificate: Skeleton nodes near
the roots, then PIA regions whose critical leaves all belong to one target
variable, with SRR side arguments drawn from variables strictly below the
target and placed only at non-critical signs.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from alba.classify import Certificate, is_inductive, transitive_closure
from alba.syntax.signature import Connective, Family, Pol, Signature
from alba.syntax.terms import (
    BOT,
    TOP,
    App,
    Inequality,
    Join,
    Meet,
    Term,
    Var,
    children,
    depth,
    flip,
    ineq_variables,
    positions,
)

VARIABLES = ("p", "q", "r", "s")
MAX_DEPTH = 5
MAX_LEAVES = 7


def random_signature(rng: np.random.Generator, index: int = 0) -> Signature:
    """One to two normal connectives per side plus one regular of each kind."""

    def otype(k: int) -> tuple[Pol, ...]:
        return tuple(Pol.ONE if rng.random() < 0.6 else Pol.DUAL for _ in range(k))

    conns = []
    for prefix, fam in (("f", Family.F_NORMAL), ("g", Family.G_NORMAL)):
        count = int(rng.integers(1, 3))
        arities = [1, 2] if count == 2 else [int(rng.integers(1, 3))]
        for i, k in enumerate(arities, 1):
            conns.append(Connective(f"{prefix}{i}", fam, k, otype(k)))
    conns.append(Connective("fr", Family.F_REGULAR, 1, otype(1)))
    conns.append(Connective("gr", Family.G_REGULAR, 1, otype(1)))
    return Signature(conns)


@dataclass(frozen=True)
class CorpusItem:
    sig: Signature
    ineq: Inequality
    certificate: Certificate


class _Builder:
    def __init__(self, sig: Signature, cert: Certificate, rng: np.random.Generator):
        self.sig = sig
        self.cert = cert
        self.rng = rng
        self.vars = sorted(cert.epsilon)
        self.leaves = 0

    def pick(self, items):
        return items[int(self.rng.integers(len(items)))]

    def critical_at(self, v: str, sign: str) -> bool:
        return (sign == "+") == (self.cert.epsilon[v] is Pol.ONE)

    def conns(self, pred) -> list[Connective]:
        return [c for c in self.sig.values() if pred(c)]

    def app(self, conn: Connective, sign: str, make) -> Term:
        signs = [sign if p is Pol.ONE else flip(sign) for p in conn.order_type]
        return App(conn.name, tuple(make(i, s) for i, s in enumerate(signs)))

    def constant(self) -> Term:
        self.leaves += 1
        return TOP if self.rng.random() < 0.5 else BOT

    def var(self, v: str) -> Term:
        self.leaves += 1
        return Var(v)

    def full(self) -> bool:
        return self.leaves >= MAX_LEAVES - 2

    # Skeleton region: any variable may appear anywhere.
    def skel(self, sign: str, d: int) -> Term:
        r = self.rng.random()
        if d <= 1 or self.full() or r < 0.15:
            return self.var(self.pick(self.vars)) if self.rng.random() < 0.9 else self.constant()
        if r < 0.35:
            op = Join if sign == "+" else Meet
            return op(self.skel(sign, d - 1), self.skel(sign, d - 1))
        if r < 0.7:
            sac = self.conns(lambda c: c.arity > 0 and c.is_f == (sign == "+"))
            return self.app(self.pick(sac), sign, lambda i, s: self.skel(s, d - 1))
        return self.pia(sign, d, self.pick(self.vars))

    # PIA region: critical leaves only for ``target``.
    def pia(self, sign: str, d: int, target: str) -> Term:
        r = self.rng.random()
        if d <= 1 or self.full() or r < 0.2:
            return self.pia_leaf(sign, target)
        if r < 0.4:
            op = Meet if sign == "+" else Join
            return op(self.pia(sign, d - 1, target), self.pia(sign, d - 1, target))
        # +g and -f are PIA
        pool = self.conns(lambda c: c.arity > 0 and c.is_g == (sign == "+"))
        conn = self.pick(pool)
        if conn.arity == 1:
            return self.app(conn, sign, lambda i, s: self.pia(s, d - 1, target))
        branch = int(self.rng.integers(conn.arity))
        return self.app(
            conn,
            sign,
            lambda i, s: self.pia(s, d - 1, target) if i == branch else self.side(s, d - 1, target),
        )

    def pia_leaf(self, sign: str, target: str) -> Term:
        if self.rng.random() < 0.65:
            return self.var(target)
        quiet = [v for v in self.vars if not self.critical_at(v, sign)]
        if quiet and self.rng.random() < 0.7:
            return self.var(self.pick(quiet))
        return self.constant()

    # SRR side argument: only variables below ``target`` at non-critical signs.
    def side(self, sign: str, d: int, target: str) -> Term:
        below = [v for v in self.vars if self.cert.below(v, target)]
        r = self.rng.random()
        if d <= 1 or self.full() or r < 0.6:
            quiet = [v for v in below if not self.critical_at(v, sign)]
            if quiet and self.rng.random() < 0.8:
                return self.var(self.pick(quiet))
            return self.constant()
        if r < 0.75:
            op = Meet if self.rng.random() < 0.5 else Join
            return op(self.side(sign, d - 1, target), self.side(sign, d - 1, target))
        conn = self.pick(self.conns(lambda c: c.arity > 0))
        return self.app(conn, sign, lambda i, s: self.side(s, d - 1, target))


def random_term(
    sig: Signature,
    rng: np.random.Generator,
    depth: int,
    leaves: Sequence[Term],
    var: str | None = None,
    var_sign: str | None = None,
    sign: str = "+",
) -> Term:
    """Random term over ``sig``; ``var`` is placed only where the sign is ``var_sign``."""
    pool = list(leaves) + [TOP, BOT]
    if var is not None and sign == var_sign:
        pool += [Var(var)] * 2
    conns = [c for c in sig.values() if c.arity > 0]
    r = rng.random()
    if depth <= 0 or r < 0.3:
        return pool[int(rng.integers(len(pool)))]

    def sub(s: str) -> Term:
        return random_term(sig, rng, depth - 1, leaves, var, var_sign, s)

    if r < 0.5 or not conns:
        op = Meet if rng.random() < 0.5 else Join
        return op(sub(sign), sub(sign))
    conn = conns[int(rng.integers(len(conns)))]
    return App(conn.name, tuple(sub(sign if p is Pol.ONE else flip(sign)) for p in conn.order_type))


def random_certificate(rng: np.random.Generator, nvars: int) -> Certificate:
    names = list(VARIABLES[:nvars])
    eps = {v: (Pol.ONE if rng.random() < 0.5 else Pol.DUAL) for v in names}
    order = list(rng.permutation(names))
    pairs = [(order[i], order[j]) for i in range(nvars) for j in range(i + 1, nvars) if rng.random() < 0.7]
    return Certificate(eps, transitive_closure(pairs))


def random_inductive(sig: Signature, rng: np.random.Generator, max_tries: int = 200) -> CorpusItem:
    for _ in range(max_tries):
        cert = random_certificate(rng, int(rng.integers(1, len(VARIABLES) + 1)))
        b = _Builder(sig, cert, rng)
        ineq = Inequality(b.skel("+", MAX_DEPTH), b.skel("-", MAX_DEPTH))
        leaves = sum(1 for side in ineq for _, s in positions(side) if not children(s))
        if not ineq_variables(ineq) or leaves > MAX_LEAVES:
            continue
        if max(depth(ineq.lhs), depth(ineq.rhs)) > MAX_DEPTH:
            continue
        verdict = is_inductive(ineq, cert, sig)
        if not verdict.holds:  # a generator bug, never a sampling accident
            raise AssertionError(f"generated a non-inductive inequality: {verdict.violation}")
        return CorpusItem(sig, ineq, cert)
    raise RuntimeError("could not generate an inequality within the size bounds")


def generate_corpus(seed: int, signatures: int = 5, per_signature: int = 100) -> list[CorpusItem]:
    rng = np.random.default_rng(seed)
    items = []
    for k in range(signatures):
        sig = random_signature(rng, k)
        items.extend(random_inductive(sig, rng) for _ in range(per_signature))
    return items
