"""Preprocessing: uniform-variable elimination, distribution and splitting."""

from __future__ import annotations

from alba.syntax.signature import Signature
from alba.syntax.terms import (
    BOT,
    TOP,
    App,
    Inequality,
    Join,
    Meet,
    Polarity,
    Term,
    Var,
    child_signs,
    ineq_variables,
    substitute_ineq,
)
from alba.trees import NodeClass, node_class, uniform_sign


def eliminate_uniform(ineq: Inequality, sig: Signature) -> Inequality:
    """Replace variables of uniform sign by top (sign +) or bottom (sign -)."""
    while True:
        mapping = {}
        for v in sorted(ineq_variables(ineq)):
            pol = uniform_sign(ineq, v, sig)
            if pol is Polarity.POSITIVE:
                mapping[Var(v)] = TOP
            elif pol is Polarity.NEGATIVE:
                mapping[Var(v)] = BOT
        if not mapping:
            return ineq
        ineq = substitute_ineq(ineq, mapping)


def _is_delta(t: Term, sign: str, sig: Signature) -> bool:
    return node_class(t, sign, sig) is NodeClass.DELTA_ADJOINT


def surface(t: Term, sign: str, sig: Signature) -> Term:
    """Distribute SAC nodes over Delta-adjoint children throughout the skeleton
    region hanging from the root, so Delta-adjoint nodes end up on top."""
    cls = node_class(t, sign, sig)
    if cls is NodeClass.DELTA_ADJOINT:
        return type(t)(surface(t.left, sign, sig), surface(t.right, sign, sig))
    if cls is not NodeClass.SAC:
        return t
    signs = child_signs(t, sign, sig)
    kids = [surface(c, s, sig) for c, s in zip(t.args, signs)]
    for i, (k, s) in enumerate(zip(kids, signs)):
        if _is_delta(k, s, sig):
            left = App(t.conn, tuple(kids[:i] + [k.left] + kids[i + 1 :]))
            right = App(t.conn, tuple(kids[:i] + [k.right] + kids[i + 1 :]))
            combine = Join if sign == "+" else Meet
            return combine(surface(left, sign, sig), surface(right, sign, sig))
    return App(t.conn, tuple(kids))


def distribute(ineq: Inequality, sig: Signature) -> Inequality:
    return Inequality(surface(ineq.lhs, "+", sig), surface(ineq.rhs, "-", sig))


def split_top_level(ineq: Inequality) -> list[Inequality]:
    """Exhaustively split joins on the left and meets on the right."""
    out, todo = [], [ineq]
    while todo:
        cur = todo.pop(0)
        if isinstance(cur.lhs, Join):
            todo[:0] = [Inequality(cur.lhs.left, cur.rhs), Inequality(cur.lhs.right, cur.rhs)]
        elif isinstance(cur.rhs, Meet):
            todo[:0] = [Inequality(cur.lhs, cur.rhs.left), Inequality(cur.lhs, cur.rhs.right)]
        else:
            out.append(cur)
    return out


def preprocess(ineq: Inequality, sig: Signature) -> list[Inequality]:
    """Uniform elimination, then distribution, then splitting; duplicates dropped."""
    ineq = eliminate_uniform(ineq, sig)
    parts = split_top_level(distribute(ineq, sig))
    return list(dict.fromkeys(parts))
