"""Executable finite-model versions of the distribution and Ackermann lemmas."""

from __future__ import annotations

import itertools
from collections.abc import Sequence

import numpy as np

from alba.models.expand import interpret_expanded
from alba.models.lattice import FiniteLE
from alba.models.semantics import evaluate
from alba.syntax.terms import App, Atom, Inequality, Term, Var, atom_key, atoms, positions, replace_at, subterm

_HOLE = Var("__x")


def _assignments(names: Sequence[Atom], n: int) -> dict[Atom, np.ndarray]:
    k = len(names)
    idx = np.arange(n**k, dtype=np.int64)
    return {a: (idx // n ** (k - 1 - i)) % n for i, a in enumerate(names)}


def _expanded_if_needed(terms: Sequence[Term], m: FiniteLE) -> FiniteLE:
    if any(isinstance(s, App) and s.conn not in m.ops for t in terms for _, s in positions(t)):
        return interpret_expanded(m)
    return m


def families(n: int, max_size: int = 3) -> np.ndarray:
    """All nonempty subsets of size at most ``max_size``, padded to
    ``max_size`` columns by repeating the first element."""
    rows = []
    for r in range(1, max_size + 1):
        for s in itertools.combinations(range(n), r):
            rows.append(list(s) + [s[0]] * (max_size - r))
    return np.array(rows, dtype=np.intp)


def distribution_violations(
    phi: Term, path: tuple[int, ...], root_sign: str, leaf_sign: str, m: FiniteLE, max_family: int = 3
) -> int:
    """Count failures of the distribution law for ``phi`` along ``path``.

    The branch to ``path`` is assumed SAC.  The argument family is joined
    at a ``+`` leaf (met at a ``-`` leaf) and the values are joined under a
    ``+`` root (met under a ``-`` root).  Every other
    atom ranges over the whole carrier.
    """
    if not isinstance(subterm(phi, path), Var):
        raise ValueError("path must point at a variable leaf")
    body = replace_at(phi, path, _HOLE)
    m = _expanded_if_needed([body], m)
    n = m.size
    others = sorted(atoms(body) - {_HOLE}, key=atom_key)
    env = _assignments(others, n)
    count = n ** len(others)
    vals = np.empty((n, count), dtype=np.intp)
    for e in range(n):
        env[_HOLE] = e
        vals[e] = np.broadcast_to(evaluate(body, m, env), (count,))
    fam = families(n, max_family)
    arg_op = m.join if leaf_sign == "+" else m.meet
    out_op = m.join if root_sign == "+" else m.meet
    arg = fam[:, 0]
    folded = vals[fam[:, 0]]
    for c in range(1, fam.shape[1]):
        arg = arg_op[arg, fam[:, c]]
        folded = out_op[folded, vals[fam[:, c]]]
    return int(np.count_nonzero(vals[arg] != folded))


def ackermann_instance_holds(
    alpha: Term, pairs: Sequence[Inequality], var: str, direction: str, m: FiniteLE
) -> bool:
    """Check the Ackermann biconditional on ``m`` for every assignment.

    Right: exists v (alpha <= v and all beta(v) <= gamma(v)) iff all
    beta(alpha) <= gamma(alpha).  Left is the order dual with v <= alpha.
    """
    v = Var(var)
    parts = [alpha, *(t for ineq in pairs for t in ineq)]
    m = _expanded_if_needed(parts, m)
    n = m.size
    others = sorted(set().union(*(atoms(t) for t in parts)) - {v}, key=atom_key)
    base = _assignments(others, n)
    count = n ** len(others)
    a = np.broadcast_to(evaluate(alpha, m, base), (count,))

    def sat(value) -> np.ndarray:
        env = dict(base)
        env[v] = value
        ok = np.ones(count, dtype=bool)
        for beta, gamma in pairs:
            b = np.broadcast_to(evaluate(beta, m, env), (count,))
            g = np.broadcast_to(evaluate(gamma, m, env), (count,))
            ok &= m.leq[b, g]
        return ok

    lhs = np.zeros(count, dtype=bool)
    for e in range(n):
        bound = m.leq[a, e] if direction == "right" else m.leq[e, a]
        lhs |= bound & sat(np.full(count, e, dtype=np.intp))
    rhs = sat(a)
    return bool(np.array_equal(lhs, rhs))
