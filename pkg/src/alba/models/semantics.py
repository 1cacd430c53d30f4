"""Vectorised evaluation, validity checking and the equivalence oracle.

Assignments are enumerated in mixed-radix order over the sorted atoms
(variables, then nominals, then conominals; each by name), the first atom
being the most significant digit.  Nominals and conominals range over the
whole carrier: on a finite lattice every element is both closed and open.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass

import numpy as np

from alba.errors import UnboundAtom
from alba.models.expand import interpret_expanded
from alba.models.lattice import FiniteLE
from alba.syntax.terms import (
    App,
    Atom,
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
    positions,
    quasi_atoms,
)

CHUNK = 1 << 18


def evaluate(t: Term, m: FiniteLE, env: Mapping[Atom, np.ndarray | int]):
    """Evaluate ``t`` pointwise over arrays of element indices."""
    if isinstance(t, (Var, Nom, CoNom)):
        try:
            return env[t]
        except KeyError:
            raise UnboundAtom(f"no value for {t}") from None
    if isinstance(t, Top):
        return m.top
    if isinstance(t, Bot):
        return m.bot
    if isinstance(t, Meet):
        return m.meet[evaluate(t.left, m, env), evaluate(t.right, m, env)]
    if isinstance(t, Join):
        return m.join[evaluate(t.left, m, env), evaluate(t.right, m, env)]
    if isinstance(t, App):
        table = m.ops[t.conn]
        if not t.args:
            return int(table)
        args = [evaluate(a, m, env) for a in t.args]
        args = np.broadcast_arrays(*[np.asarray(a) for a in args])
        return table[tuple(args)]
    raise TypeError(f"not a term: {t!r}")


def eval_term(t: Term, m: FiniteLE, assignment: Mapping[Atom, int]) -> int:
    """Value of ``t`` under a single assignment."""
    if any(isinstance(s, App) and s.conn not in m.ops for s in _subterms(t)):
        m = interpret_expanded(m)
    return int(evaluate(t, m, assignment))


def _subterms(t: Term):
    return (s for _, s in positions(t))


def _holds(ineq: Inequality, m: FiniteLE, env) -> np.ndarray:
    return m.leq[evaluate(ineq.lhs, m, env), evaluate(ineq.rhs, m, env)]


@dataclass(frozen=True)
class Validity:
    valid: bool
    counterexample: dict[Atom, int] | None
    assignments: int

    def __bool__(self) -> bool:
        return self.valid


def _as_quasi(target: Inequality | QuasiInequality) -> QuasiInequality:
    return target if isinstance(target, QuasiInequality) else QuasiInequality((), target)


def _needs_expansion(q: QuasiInequality, m: FiniteLE) -> bool:
    parts = [q.conclusion, *q.premises]
    return any(isinstance(s, App) and s.conn not in m.ops for p in parts for side in p for s in _subterms(side))


def check_validity(target: Inequality | QuasiInequality, m: FiniteLE) -> Validity:
    """Check a (quasi-)inequality on every assignment of its atoms."""
    q = _as_quasi(target)
    if _needs_expansion(q, m):
        m = interpret_expanded(m)
    names: Sequence[Atom] = sorted(quasi_atoms(q), key=atom_key)
    n, k = m.size, len(names)
    total = n**k
    weights = [n ** (k - 1 - i) for i in range(k)]
    for start in range(0, total, CHUNK):
        idx = np.arange(start, min(total, start + CHUNK), dtype=np.int64)
        env = {a: (idx // w) % n for a, w in zip(names, weights)}
        ok = _holds(q.conclusion, m, env)
        for p in q.premises:
            ok = ok | ~_holds(p, m, env)
        ok = np.broadcast_to(ok, idx.shape)
        if not ok.all():
            first = int(np.flatnonzero(~ok)[0])
            return Validity(False, {a: int(v[first]) for a, v in env.items()}, total)
    return Validity(True, None, total)


@dataclass(frozen=True)
class OracleVerdict:
    equivalent: bool
    input_valid: bool
    outputs_valid: bool
    model: FiniteLE
    counterexample: dict[Atom, int] | None = None
    witness_side: str | None = None  # "input" or "output"
    assignments: int = 0

    def __bool__(self) -> bool:
        return self.equivalent


def equivalence_oracle(
    inp: Inequality, outputs: Sequence[QuasiInequality | Inequality], m: FiniteLE
) -> OracleVerdict:
    """Validity of the input on ``m`` agrees with the conjunction of outputs."""
    vin = check_validity(inp, m)
    first_bad = None
    for q in outputs:
        v = check_validity(q, m)
        if not v.valid:
            first_bad = v
            break
    vout = first_bad is None
    if vin.valid == vout:
        return OracleVerdict(True, vin.valid, vout, m, assignments=vin.assignments)
    if vin.valid:
        return OracleVerdict(False, True, False, m, first_bad.counterexample, "output", vin.assignments)
    return OracleVerdict(False, False, True, m, vin.counterexample, "input", vin.assignments)
