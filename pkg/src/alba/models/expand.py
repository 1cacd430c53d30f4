"""Interpretation of the expanded signature on a finite model.

Residuals and Galois adjoints are computed by brute force from the
defining adjunction; normalizations follow their case definitions.  Also
home to the finite-model sanity laws: the normalization identities, the
collapse of canonical extensions, and complete preservation.
"""

from __future__ import annotations

import itertools
import weakref

import numpy as np

from alba.errors import AdjointMissing
from alba.models.lattice import FiniteLE, Lattice
from alba.syntax.signature import Connective, Pol, dual_signature, expand_signature, slot_is_down


def normalization_table(lat: Lattice, conn: Connective, table: np.ndarray) -> np.ndarray:
    """Normalization of a unary regular operation."""
    out = table.copy()
    one = conn.eps(1) is Pol.ONE
    if conn.is_f:
        out[lat.bot if one else lat.top] = lat.bot
    else:
        out[lat.top if one else lat.bot] = lat.top
    return out


def _relation(lat: Lattice, root: Connective, table: np.ndarray, slots: list[int]) -> bool:
    value = int(table[tuple(slots[1:])])
    return bool(lat.leq[value, slots[0]] if root.is_f else lat.leq[slots[0], value])


def solver_table(lat: Lattice, root: Connective, table: np.ndarray, target: int) -> np.ndarray:
    """Table of the family member of ``root`` solving slot ``target``."""
    n, arity = lat.size, root.arity
    if target == 0:
        return table
    down = slot_is_down(root, target)
    out = np.empty((n,) * arity, dtype=np.intp)
    for args in itertools.product(range(n), repeat=arity):
        slots = [args[target - 1], *args]
        cands = []
        for c in range(n):
            slots[target] = c
            if _relation(lat, root, table, slots):
                cands.append(c)
        best = lat.join_all(cands) if down else lat.meet_all(cands)
        if best not in cands:
            kind = "largest" if down else "least"
            raise AdjointMissing(f"{root.name}: no {kind} solution in coordinate {target} at {args}")
        out[args] = best
    return out


_EXPANDED: weakref.WeakKeyDictionary = weakref.WeakKeyDictionary()


def interpret_expanded(m: FiniteLE) -> FiniteLE:
    """Return ``m`` with tables for every connective of the expanded signature."""
    sig = expand_signature(m.sig)
    if m.sig.expanded and all(c in m.ops for c in sig):
        return m
    if m in _EXPANDED:
        return _EXPANDED[m]
    lat = m.lattice
    tables = dict(m.ops)
    for name, conn in sig.items():
        if conn.origin.kind == "normalization":
            parent = sig[conn.origin.parent]
            tables[name] = normalization_table(lat, parent, m.ops[parent.name])
    for name in sig:
        member = sig.family_member(name)
        if member is None or member[1] != 0:
            continue
        root = sig[name]
        for slot in range(1, root.arity + 1):
            tables[sig.solver(name, slot)] = solver_table(lat, root, tables[name], slot)
    out = FiniteLE(lat, sig, tables, m.name)
    _EXPANDED[m] = out
    return out


def normalization_identity_violations(m: FiniteLE) -> list[str]:
    """``f = f(bot) v dia_f`` and its three order variants, pointwise."""
    em = interpret_expanded(m)
    lat = em.lattice
    out = []
    for name, conn in em.sig.items():
        if conn.origin.kind != "normalization":
            continue
        parent = em.sig[conn.origin.parent]
        f = em.ops[parent.name]
        norm = em.ops[name]
        one = parent.eps(1) is Pol.ONE
        if parent.is_f:
            const = f[lat.bot if one else lat.top]
            expect = lat.join[const, norm]
        else:
            const = f[lat.top if one else lat.bot]
            expect = lat.meet[const, norm]
        if not np.array_equal(expect, f):
            out.append(f"{parent.name}: normalization identity fails")
    return out


def adjunction_violations(m: FiniteLE) -> list[str]:
    """Check each residual against the defining biconditional."""
    em = interpret_expanded(m)
    lat, sig = em.lattice, em.sig
    n = lat.size
    out = []
    for name in sig:
        member = sig.family_member(name)
        if member is None or member[1] == 0:
            continue
        root_name, slot = member
        root = sig[root_name]
        rt, st = em.ops[root_name], em.ops[name]
        down = slot_is_down(root, slot)
        for slots in itertools.product(range(n), repeat=root.arity + 1):
            rel = _relation(lat, root, rt, list(slots))
            args = list(slots[1:])
            args[slot - 1] = slots[0]
            sol = int(st[tuple(args)])
            via = lat.leq[slots[slot], sol] if down else lat.leq[sol, slots[slot]]
            if rel != bool(via):
                out.append(f"{name}: adjunction fails at {slots}")
                break
    return out


def _eps_leq(lat: Lattice, conn: Connective, a: tuple, b: tuple) -> bool:
    """Product order twisted by the order-type."""
    for i, (x, y) in enumerate(zip(a, b), 1):
        if conn.eps(i) is Pol.ONE:
            if not lat.leq[x, y]:
                return False
        elif not lat.leq[y, x]:
            return False
    return True


def sigma_pi_violations(m: FiniteLE) -> list[str]:
    """On a finite model every element is both closed and open, so the
    sigma-extension of each F-connective and the pi-extension of each
    G-connective coincide with the original operation."""
    lat = m.lattice
    n = lat.size
    out = []
    for name, conn in m.sig.base().items():
        if conn.arity == 0:
            continue
        table = m.ops[name]
        tuples = list(itertools.product(range(n), repeat=conn.arity))
        for u in tuples:
            if conn.is_f:
                # f^sigma(k) = meet of f(a) over a >= k; then join over k <= u
                ks = [k for k in tuples if _eps_leq(lat, conn, k, u)]
                inner = [lat.meet_all(int(table[a]) for a in tuples if _eps_leq(lat, conn, k, a)) for k in ks]
                ext = lat.join_all(inner)
            else:
                os_ = [o for o in tuples if _eps_leq(lat, conn, u, o)]
                inner = [lat.join_all(int(table[a]) for a in tuples if _eps_leq(lat, conn, a, o)) for o in os_]
                ext = lat.meet_all(inner)
            if ext != int(table[u]):
                out.append(f"{name}: canonical extension differs at {u}")
                break
    return out


def complete_preservation_violations(m: FiniteLE) -> list[str]:
    """Preservation over every subset in each coordinate (non-empty subsets
    for regular connectives)."""
    lat = m.lattice
    n = lat.size
    out = []
    for name, conn in m.sig.base().items():
        table = m.ops[name]
        for i in range(1, conn.arity + 1):
            one = conn.eps(i) is Pol.ONE
            arg_join = one if conn.is_f else not one
            t = np.moveaxis(table, i - 1, 0)
            bad = False
            for r in range(0 if conn.is_normal else 1, n + 1):
                for subset in itertools.combinations(range(n), r):
                    arg = lat.join_all(subset) if arg_join else lat.meet_all(subset)
                    lhs = t[arg]
                    vals = [t[s] for s in subset]
                    if conn.is_f:
                        rhs = np.full_like(lhs, lat.bot)
                        for v in vals:
                            rhs = lat.join[rhs, v]
                    else:
                        rhs = np.full_like(lhs, lat.top)
                        for v in vals:
                            rhs = lat.meet[rhs, v]
                    if not np.array_equal(lhs, rhs):
                        out.append(f"{name}: coordinate {i} fails on subset {subset}")
                        bad = True
                        break
                if bad:
                    break
    return out


def dual_model(m: FiniteLE) -> FiniteLE:
    """Order-dual lattice with the same tables over the dual signature."""
    base = m.sig.base()
    ops = {k: v for k, v in m.ops.items() if k in base}
    return FiniteLE(m.lattice.dual(), dual_signature(base), ops, m.name)
