"""Invariant checks over systems and traces."""

from __future__ import annotations

from alba.classify import Certificate, tree_is_inductive
from alba.engine.system import System, Trace
from alba.syntax.signature import Pol, Signature
from alba.syntax.terms import (
    BOT,
    TOP,
    App,
    Inequality,
    Term,
    Var,
    is_pure,
    syntactically_closed,
    syntactically_open,
)
from alba.trees import analyze_branch, build_signed_tree, is_critical, leaves


def member_trees(ineq: Inequality, sig: Signature):
    """Members are read as ``-lhs`` and ``+rhs`` trees."""
    return build_signed_tree(ineq.lhs, "-", sig), build_signed_tree(ineq.rhs, "+", sig)


def is_stripped(sys: System, cert: Certificate, sig: Signature) -> bool:
    """Goal pure; each member has a pure side and an inductive side whose
    critical branches are PIA only."""
    if not (is_pure(sys.goal.lhs) and is_pure(sys.goal.rhs)):
        return False
    for m in sys.members:
        lhs, rhs = m.ineq
        if not (is_pure(lhs) or is_pure(rhs)):
            return False
        for tree in member_trees(m.ineq, sig):
            if not tree_is_inductive(tree, cert).holds:
                return False
            for leaf in leaves(tree):
                if is_critical(leaf, cert.epsilon):
                    rep = analyze_branch(tree, leaf.path)
                    if rep.p2:
                        return False
    return True


def has_critical(ineq: Inequality, var: str, pol: Pol, sig: Signature) -> bool:
    eps = {var: pol}
    return any(is_critical(leaf, eps) for tree in member_trees(ineq, sig) for leaf in leaves(tree))


def in_solved_form(ineq: Inequality, var: str, pol: Pol) -> bool:
    v = Var(var)
    if pol is Pol.ONE:
        return ineq.rhs == v and is_pure(ineq.lhs)
    return ineq.lhs == v and is_pure(ineq.rhs)


def is_ackermann_ready(sys: System, var: str, pol: Pol, sig: Signature) -> bool:
    """Every member either solves for ``var`` over a pure side or holds no
    critical occurrence of it."""
    return all(
        in_solved_form(m.ineq, var, pol) or not has_critical(m.ineq, var, pol, sig) for m in sys.members
    )


def check_safety(trace: Trace) -> bool:
    """Only Ackermann steps may rewrite side-condition members."""
    return all(not s.touches_side_condition or s.rule == "ackermann" for s in trace.steps)


def check_pivotality(trace: Trace) -> bool:
    return all(s.pivotal for s in trace.steps if s.rule == "approximation")


def _head(t: Term, sig: Signature):
    if isinstance(t, App) and t.conn in sig and sig[t.conn].origin.kind == "adjoint":
        return sig[t.conn]
    return None


def check_topological_adequacy(sys: System, sig: Signature) -> bool:
    """Every black-adjoint member has its side condition in S."""
    present = set(sys.inequalities)
    for lhs, rhs in sys.inequalities:
        for t, on_left in ((lhs, True), (rhs, False)):
            black = _head(t, sig)
            if black is None:
                continue
            reg = sig[black.origin.parent]
            arg = t.args[0]
            one = reg.eps(1) is Pol.ONE
            need = None
            if reg.is_f and not on_left and one:  # phi <= bbox_f psi
                need = Inequality(App(reg.name, (BOT,)), arg)
            elif reg.is_f and on_left and not one:  # btl_f phi <= psi
                need = Inequality(App(reg.name, (TOP,)), arg)
            elif reg.is_g and on_left and one:  # bdia_g phi <= psi
                need = Inequality(arg, App(reg.name, (TOP,)))
            elif reg.is_g and not on_left and not one:  # phi <= btr_g psi
                need = Inequality(arg, App(reg.name, (BOT,)))
            if need is not None and need not in present:
                return False
    return True


def check_compact_appropriate(sys: System, sig: Signature) -> bool:
    """Every non-pure member has a syntactically closed lhs and open rhs."""
    for m in sys.members:
        if m.pure:
            continue
        lhs, rhs = m.ineq
        if not (syntactically_closed(lhs, sig) and syntactically_open(rhs, sig)):
            return False
    return True


__all__ = [
    "check_compact_appropriate",
    "check_pivotality",
    "check_safety",
    "check_topological_adequacy",
    "has_critical",
    "in_solved_form",
    "is_ackermann_ready",
    "is_stripped",
    "member_trees",
]
