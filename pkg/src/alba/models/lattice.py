"""Finite lattices and finite lattice expansions (models)."""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from alba.errors import LawViolation, ModelError, NotALattice
from alba.syntax.signature import Pol, Signature


def reflexive_transitive_closure(n: int, pairs: Iterable[tuple[int, int]]) -> np.ndarray:
    leq = np.eye(n, dtype=bool)
    for a, b in pairs:
        if not (0 <= a < n and 0 <= b < n):
            raise ModelError(f"element out of range in leq {a} {b}")
        leq[a, b] = True
    for k in range(n):  # Warshall
        leq |= np.outer(leq[:, k], leq[k, :])
    return leq


@dataclass(frozen=True, eq=False)
class Lattice:
    """A finite lattice given by its order matrix; elements are ``0..n-1``."""

    leq: np.ndarray
    name: str = ""

    def __post_init__(self) -> None:
        leq = np.asarray(self.leq, dtype=bool)
        object.__setattr__(self, "leq", leq)
        n = leq.shape[0]
        if leq.shape != (n, n) or n == 0:
            raise NotALattice("order matrix must be square and non-empty")
        if not leq.diagonal().all():
            raise NotALattice("order is not reflexive")
        both = leq & leq.T
        np.fill_diagonal(both, False)
        if both.any():
            a, b = map(int, np.argwhere(both)[0])
            raise NotALattice(f"order is not antisymmetric: {a} and {b}", (a, b))
        if (np.logical_and(leq[:, :, None], leq[None, :, :]) & ~leq[:, None, :]).any():
            raise NotALattice("order is not transitive")
        self.meet  # noqa: B018 - force the bound computations
        self.join  # noqa: B018

    @property
    def size(self) -> int:
        return self.leq.shape[0]

    def _bound(self, upper: bool) -> np.ndarray:
        n, leq = self.size, self.leq
        out = np.empty((n, n), dtype=np.intp)
        for a in range(n):
            for b in range(n):
                cands = np.flatnonzero(leq[a] & leq[b]) if upper else np.flatnonzero(leq[:, a] & leq[:, b])
                best = [c for c in cands if all((leq[c, d] if upper else leq[d, c]) for d in cands)]
                if not best:
                    kind = "join" if upper else "meet"
                    raise NotALattice(f"{a} and {b} have no {kind}", (a, b))
                out[a, b] = best[0]
        return out

    @cached_property
    def join(self) -> np.ndarray:
        return self._bound(upper=True)

    @cached_property
    def meet(self) -> np.ndarray:
        return self._bound(upper=False)

    @cached_property
    def bot(self) -> int:
        return int(np.flatnonzero(self.leq.all(axis=1))[0])

    @cached_property
    def top(self) -> int:
        return int(np.flatnonzero(self.leq.all(axis=0))[0])

    def join_all(self, xs: Iterable[int]) -> int:
        out = self.bot
        for x in xs:
            out = int(self.join[out, x])
        return out

    def meet_all(self, xs: Iterable[int]) -> int:
        out = self.top
        for x in xs:
            out = int(self.meet[out, x])
        return out

    @cached_property
    def join_irreducibles(self) -> list[int]:
        n = self.size
        return [
            j for j in range(n)
            if j != self.bot and self.join_all(x for x in range(n) if self.leq[x, j] and x != j) != j
        ]

    @cached_property
    def meet_irreducibles(self) -> list[int]:
        n = self.size
        return [
            m for m in range(n)
            if m != self.top and self.meet_all(x for x in range(n) if self.leq[m, x] and x != m) != m
        ]

    @cached_property
    def is_distributive(self) -> bool:
        j, m = self.join, self.meet
        n = self.size
        a, b, c = np.meshgrid(range(n), range(n), range(n), indexing="ij")
        return bool((m[a, j[b, c]] == j[m[a, b], m[a, c]]).all())

    def dual(self) -> Lattice:
        return Lattice(self.leq.T.copy(), f"{self.name}^op" if self.name else "")

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]], name: str = "") -> Lattice:
        return cls(reflexive_transitive_closure(n, pairs), name)

    @classmethod
    def chain(cls, n: int) -> Lattice:
        return cls(np.triu(np.ones((n, n), dtype=bool)), f"C{n}")


@dataclass(frozen=True, eq=False)
class FiniteLE:
    """A finite lattice expansion: a lattice plus one table per connective.

    A table for an ``n``-ary connective is an integer array of shape
    ``(size,) * n``.
    """

    lattice: Lattice
    sig: Signature
    ops: Mapping[str, np.ndarray] = field(default_factory=dict)
    name: str = ""

    @property
    def size(self) -> int:
        return self.lattice.size

    @property
    def leq(self) -> np.ndarray:
        return self.lattice.leq

    @property
    def meet(self) -> np.ndarray:
        return self.lattice.meet

    @property
    def join(self) -> np.ndarray:
        return self.lattice.join

    @property
    def bot(self) -> int:
        return self.lattice.bot

    @property
    def top(self) -> int:
        return self.lattice.top

    def __repr__(self) -> str:
        return f"<FiniteLE {self.name or '?'} size={self.size} ops={sorted(self.ops)}>"


def law_violations(m: FiniteLE, names: Iterable[str] | None = None) -> list[str]:
    """Check the additivity/multiplicativity laws of every connective.

    Normal connectives must also send the relevant bound to the relevant
    bound; regular ones only preserve non-empty finite operations.
    """
    lat = m.lattice
    out = []
    for name in names if names is not None else m.sig:
        conn = m.sig[name]
        if name not in m.ops:
            continue
        table = m.ops[name]
        for i in range(1, conn.arity + 1):
            t = np.moveaxis(table, i - 1, 0)  # coordinate i first
            one = conn.eps(i) is Pol.ONE
            # which lattice operation goes in, and which comes out
            arg_is_join = one if conn.is_f else not one
            op_in = lat.join if arg_is_join else lat.meet
            op_out = lat.join if conn.is_f else lat.meet
            n = m.size
            for a in range(n):
                for b in range(n):
                    lhs = t[op_in[a, b]]
                    rhs = op_out[t[a], t[b]]
                    if not np.array_equal(lhs, rhs):
                        out.append(f"{name}: coordinate {i} fails the binary law at {a}, {b}")
                        break
                else:
                    continue
                break
            if conn.is_normal:
                unit_in = lat.bot if arg_is_join else lat.top
                unit_out = lat.bot if conn.is_f else lat.top
                if not (t[unit_in] == unit_out).all():
                    out.append(f"{name}: coordinate {i} does not send {unit_in} to {unit_out}")
    return out


def _as_table(raw, arity: int, n: int, name: str) -> np.ndarray:
    if isinstance(raw, Mapping):
        table = np.full((n,) * arity, -1, dtype=np.intp)
        for key, val in raw.items():
            key = (key,) if isinstance(key, int) else tuple(key)
            table[key] = val
    else:
        table = np.asarray(raw, dtype=np.intp).reshape((n,) * arity)
    if table.shape != (n,) * arity:
        raise ModelError(f"{name}: table has shape {table.shape}, expected {(n,) * arity}")
    if (table < 0).any():
        missing = tuple(int(x) for x in np.argwhere(table < 0)[0])
        raise ModelError(f"{name}: no value given for {missing}")
    if (table >= n).any():
        raise ModelError(f"{name}: value out of range")
    return table


def validate_model(
    size: int,
    leq: Iterable[tuple[int, int]] | np.ndarray,
    ops: Mapping[str, object],
    sig: Signature,
    name: str = "",
) -> FiniteLE:
    """Build a model from raw data and check every law; raises on failure."""
    if isinstance(leq, np.ndarray) and leq.dtype == bool:
        lat = Lattice(leq, name)
    else:
        lat = Lattice.from_pairs(size, leq, name)
    base = sig.base()
    tables = {}
    for cname, conn in base.items():
        if cname not in ops:
            raise ModelError(f"no table for connective {cname!r}")
        tables[cname] = _as_table(ops[cname], conn.arity, size, cname)
    extra = set(ops) - set(base)
    if extra:
        raise ModelError(f"tables for unknown connectives {sorted(extra)}")
    m = FiniteLE(lat, base, tables, name)
    bad = law_violations(m)
    if bad:
        raise LawViolation(bad[0], bad)
    return m


def product_tuples(n: int, arity: int):
    return itertools.product(range(n), repeat=arity)
