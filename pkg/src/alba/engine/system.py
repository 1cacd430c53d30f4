"""Systems, rule applications and traces.

A system is a tuple of members (inequalities tagged with a side-condition
flag) plus a goal inequality; it reads as the quasi-inequality
``members => goal``.  Every rule is a pure function from a system to a
new system and raises a :class:`~alba.errors.RuleError` subclass when its
premises fail.
"""

from __future__ import annotations

import re
from collections.abc import Mapping
from dataclasses import dataclass, field, replace
from functools import reduce
from typing import Any

from alba.errors import (
    GammaNotAdmissible,
    HeadNotResiduable,
    NotAckermannReady,
    NotPivotal,
    NotSACBranch,
    NotSplittable,
    RuleError,
)
from alba.syntax.parser import format_inequality
from alba.syntax.signature import Signature, slot_is_down
from alba.syntax.terms import (
    BOT,
    TOP,
    App,
    Atom,
    CoNom,
    Inequality,
    Join,
    Meet,
    Nom,
    Path,
    QuasiInequality,
    Term,
    Var,
    atoms,
    child_signs,
    children,
    in_base_language,
    ineq_atoms,
    is_pure,
    negative_in,
    positive_in,
    replace_at,
    substitute_ineq,
)
from alba.trees import NodeClass, format_path, node_class

SIDES = ("lhs", "rhs")
FLAVORS = ("L+", "L-", "R+", "R-")


@dataclass(frozen=True)
class Member:
    ineq: Inequality
    side_condition: bool = False

    @property
    def pure(self) -> bool:
        return is_pure(self.ineq.lhs) and is_pure(self.ineq.rhs)

    @property
    def tags(self) -> frozenset[str]:
        out = set()
        if self.side_condition:
            out.add("SIDE_CONDITION")
        if self.pure:
            out.add("PURE")
        return frozenset(out)


_INDEXED = re.compile(r"^([jm])(\d+)$")


@dataclass(frozen=True)
class System:
    members: tuple[Member, ...]
    goal: Inequality
    next_nominal: int = 1
    next_conominal: int = 1

    @classmethod
    def initial(cls, ineq: Inequality) -> System:
        nom = con = 1
        for a in ineq_atoms(ineq):
            m = _INDEXED.match(a.name)
            if m and isinstance(a, Nom) and m.group(1) == "j":
                nom = max(nom, int(m.group(2)) + 1)
            if m and isinstance(a, CoNom) and m.group(1) == "m":
                con = max(con, int(m.group(2)) + 1)
        return cls((), ineq, nom, con)

    @property
    def inequalities(self) -> list[Inequality]:
        return [m.ineq for m in self.members]

    def is_pure(self) -> bool:
        return all(m.pure for m in self.members) and is_pure(self.goal.lhs) and is_pure(self.goal.rhs)

    def variables(self) -> set[str]:
        out = {a.name for a in ineq_atoms(self.goal) if isinstance(a, Var)}
        for m in self.members:
            out |= {a.name for a in ineq_atoms(m.ineq) if isinstance(a, Var)}
        return out

    def key(self) -> tuple:
        """Identity up to member order and fresh-name counters."""
        return (tuple(sorted((repr(m.ineq), m.side_condition) for m in self.members)), repr(self.goal))

    def to_quasi(self) -> QuasiInequality:
        prem = sorted(self.inequalities, key=format_inequality)
        return QuasiInequality(tuple(prem), self.goal)

    def render(self) -> str:
        lines = []
        for i, m in enumerate(self.members):
            tag = " [side]" if m.side_condition else ""
            lines.append(f"  S[{i}] {format_inequality(m.ineq)}{tag}")
        lines.append(f"  goal {format_inequality(self.goal)}")
        return "\n".join(lines)


# -- rule implementations ----------------------------------------------------


def _side_term(ineq: Inequality, side: str) -> Term:
    if side not in SIDES:
        raise RuleError(f"side must be 'lhs' or 'rhs', got {side!r}")
    return ineq.lhs if side == "lhs" else ineq.rhs


def _with_side(ineq: Inequality, side: str, t: Term) -> Inequality:
    return Inequality(t, ineq.rhs) if side == "lhs" else Inequality(ineq.lhs, t)


def approximate(
    sys: System, flavor: str, path: Path, sig: Signature, pivotal: bool = True
) -> tuple[System, bool]:
    """Approximation rule on the goal.  Returns the new system and whether the
    position was pivotal (the subterm at ``path`` is not a SAC node)."""
    if flavor not in FLAVORS:
        raise RuleError(f"unknown approximation flavor {flavor!r}")
    side = "lhs" if flavor[0] == "L" else "rhs"
    want = flavor[1]
    t = _side_term(sys.goal, side)
    sign = "+" if side == "lhs" else "-"
    node = t
    try:
        for i in path:
            if node_class(node, sign, sig) is not NodeClass.SAC:
                raise NotSACBranch(f"node above {list(path)} is not SAC")
            kids = children(node)
            sign = child_signs(node, sign, sig)[i]
            node = kids[i]
    except IndexError:
        raise NotSACBranch(f"no position {list(path)} in the {side}") from None
    if sign != want:
        raise NotSACBranch(f"position {list(path)} has sign {sign}, flavor {flavor} needs {want}")
    gamma = node
    if not (in_base_language(gamma, sig) or isinstance(gamma, (Nom, CoNom))):
        raise GammaNotAdmissible("approximated subterm must be a base-language term or a single (co)nominal")
    is_pivotal = node_class(gamma, sign, sig) is not NodeClass.SAC
    if pivotal and not is_pivotal:
        raise NotPivotal(f"position {list(path)} is a SAC node; the SAC branch is not maximal")
    if sign == "+":
        fresh: Atom = Nom(f"j{sys.next_nominal}")
        new = Member(Inequality(fresh, gamma))
        sys = replace(sys, next_nominal=sys.next_nominal + 1)
    else:
        fresh = CoNom(f"m{sys.next_conominal}")
        new = Member(Inequality(gamma, fresh))
        sys = replace(sys, next_conominal=sys.next_conominal + 1)
    goal = _with_side(sys.goal, side, replace_at(t, path, fresh))
    return replace(sys, members=sys.members + (new,), goal=goal), is_pivotal


def default_residuation_side(ineq: Inequality, sig: Signature) -> str:
    if isinstance(ineq.lhs, App) and ineq.lhs.args and sig[ineq.lhs.conn].is_f:
        return "lhs"
    if isinstance(ineq.rhs, App) and ineq.rhs.args and sig[ineq.rhs.conn].is_g:
        return "rhs"
    raise HeadNotResiduable("neither an F-head on the left nor a G-head on the right")


def residuate_inequality(
    ineq: Inequality, coordinate: int, sig: Signature, side: str | None = None
) -> list[tuple[Inequality, bool]]:
    """Residuate ``ineq`` at ``coordinate`` (1-based) of the head on ``side``.

    Returns the resulting inequalities, each with a side-condition flag.
    """
    side = side or default_residuation_side(ineq, sig)
    head = _side_term(ineq, side)
    other = ineq.rhs if side == "lhs" else ineq.lhs
    if not isinstance(head, App) or not head.args:
        raise HeadNotResiduable(f"the {side} has no connective head")
    conn = sig[head.conn]
    if conn.is_f != (side == "lhs"):
        raise HeadNotResiduable(f"{conn.name} on the {side} cannot be residuated")
    if not 1 <= coordinate <= conn.arity:
        raise HeadNotResiduable(f"{conn.name} has no coordinate {coordinate}")
    if conn.is_regular:
        return _residuate_regular(head, other, conn, sig)
    member = sig.family_member(conn.name)
    if member is None:
        raise HeadNotResiduable(f"{conn.name} has no residuals in this signature")
    root_name, slot = member
    root = sig[root_name]
    n = root.arity
    # slot values: slot ``slot`` is held by ``other``; coordinates map to the rest
    values: dict[int, Term] = {slot: other}
    for k, arg in enumerate(head.args, 1):
        values[0 if (slot and k == slot) else k] = arg
    target = 0 if (slot and coordinate == slot) else coordinate
    solver = sig.solver(root_name, target)
    if target == 0:
        args = tuple(values[i] for i in range(1, n + 1))
    else:
        args = tuple(values[0] if i == target else values[i] for i in range(1, n + 1))
    solved = App(solver, args)
    if slot_is_down(root, target):
        return [(Inequality(values[target], solved), False)]
    return [(Inequality(solved, values[target]), False)]


def _residuate_regular(head: App, other: Term, conn, sig: Signature) -> list[tuple[Inequality, bool]]:
    from alba.syntax.signature import Pol, black_adjoint_name

    phi = head.args[0]
    black = black_adjoint_name(conn)
    one = conn.eps(1) is Pol.ONE
    if conn.is_f:
        const = BOT if one else TOP
        side = Inequality(App(conn.name, (const,)), other)
        main = Inequality(phi, App(black, (other,))) if one else Inequality(App(black, (other,)), phi)
    else:
        const = TOP if one else BOT
        side = Inequality(other, App(conn.name, (const,)))
        main = Inequality(App(black, (other,)), phi) if one else Inequality(phi, App(black, (other,)))
    return [(side, True), (main, False)]


def residuate(
    sys: System, index: int, coordinate: int, sig: Signature, side: str | None = None
) -> tuple[System, bool]:
    """Residuation on member ``index``.  Returns the system and whether a
    side-condition member was rewritten."""
    try:
        member = sys.members[index]
    except IndexError:
        raise RuleError(f"no member {index}") from None
    results = residuate_inequality(member.ineq, coordinate, sig, side)
    new = tuple(Member(i, flag) for i, flag in results)
    members = sys.members[:index] + new + sys.members[index + 1 :]
    return replace(sys, members=members), member.side_condition


def residuate_goal(sys: System, coordinate: int, sig: Signature, side: str) -> System:
    results = residuate_inequality(sys.goal, coordinate, sig, side)
    if len(results) != 1:
        raise HeadNotResiduable("regular connectives are not residuated in the goal")
    return replace(sys, goal=results[0][0])


def split_inequality(ineq: Inequality, side: str | None = None) -> list[Inequality]:
    if side in (None, "rhs") and isinstance(ineq.rhs, Meet):
        return [Inequality(ineq.lhs, ineq.rhs.left), Inequality(ineq.lhs, ineq.rhs.right)]
    if side in (None, "lhs") and isinstance(ineq.lhs, Join):
        return [Inequality(ineq.lhs.left, ineq.rhs), Inequality(ineq.lhs.right, ineq.rhs)]
    raise NotSplittable("needs a meet on the right or a join on the left")


def split(sys: System, index: int, side: str | None = None) -> tuple[System, bool]:
    try:
        member = sys.members[index]
    except IndexError:
        raise RuleError(f"no member {index}") from None
    parts = split_inequality(member.ineq, side)
    new = tuple(Member(p, member.side_condition) for p in parts)
    return replace(sys, members=sys.members[:index] + new + sys.members[index + 1 :]), member.side_condition


def ackermann(sys: System, var: str, direction: str, sig: Signature) -> System:
    """Right (``right``) or left (``left``) Ackermann rule eliminating ``var``."""
    v = Var(var)
    if direction not in ("right", "left"):
        raise RuleError(f"direction must be 'right' or 'left', got {direction!r}")
    if v in atoms(sys.goal.lhs) or v in atoms(sys.goal.rhs):
        raise NotAckermannReady(f"{var} occurs in the goal")
    right = direction == "right"
    bounds: list[Term] = []
    rest: list[Member] = []
    for m in sys.members:
        lhs, rhs = m.ineq
        if right and rhs == v and v not in atoms(lhs):
            bounds.append(lhs)
        elif not right and lhs == v and v not in atoms(rhs):
            bounds.append(rhs)
        else:
            if right:
                ok = positive_in(lhs, v, sig) and negative_in(rhs, v, sig)
            else:
                ok = negative_in(lhs, v, sig) and positive_in(rhs, v, sig)
            if not ok:
                raise NotAckermannReady(f"{format_inequality(m.ineq)} has {var} with the wrong polarity")
            rest.append(m)
    if bounds:
        value = reduce(Join if right else Meet, bounds)
    else:
        value = BOT if right else TOP
    members = tuple(Member(substitute_ineq(m.ineq, {v: value}), m.side_condition) for m in rest)
    return replace(sys, members=members)


def eliminate_atom(sys: System, atom: Nom | CoNom) -> System:
    """Output compaction: drop a nominal (or conominal) bound by a single member.

    For a nominal ``j`` the goal must read ``j <= b`` and ``S`` must hold
    exactly one member ``j <= a`` (not a side condition) with ``j`` absent
    from every other member; the pair becomes the goal ``a <= b``.  The
    conominal case is dual.
    """
    goal = sys.goal
    nominal = isinstance(atom, Nom)
    if nominal:
        ok = goal.lhs == atom and atom not in atoms(goal.rhs)
    else:
        ok = goal.rhs == atom and atom not in atoms(goal.lhs)
    if not ok:
        raise RuleError("the goal does not isolate the atom")
    holders = [i for i, m in enumerate(sys.members) if atom in ineq_atoms(m.ineq)]
    if len(holders) != 1:
        raise RuleError("the atom must occur in exactly one member")
    member = sys.members[holders[0]]
    lhs, rhs = member.ineq
    if member.side_condition:
        raise RuleError("side conditions are never compacted")
    if nominal:
        if lhs != atom or atom in atoms(rhs):
            raise RuleError("member is not of the form j <= a")
        new_goal = Inequality(rhs, goal.rhs)
    else:
        if rhs != atom or atom in atoms(lhs):
            raise RuleError("member is not of the form b <= m")
        new_goal = Inequality(goal.lhs, lhs)
    members = sys.members[: holders[0]] + sys.members[holders[0] + 1 :]
    return replace(sys, members=members, goal=new_goal)


# -- trace -------------------------------------------------------------------


@dataclass(frozen=True)
class Step:
    rule: str
    args: Mapping[str, Any]
    system_index: int
    before: System
    after: System
    pivotal: bool | None = None
    touches_side_condition: bool = False

    def location(self) -> str:
        a = self.args
        if "path" in a:
            return f"{a['flavor']} {format_path(tuple(a['path']))}"
        if "index" in a:
            extra = f" coordinate {a['coordinate']}" if "coordinate" in a else ""
            return f"S[{a['index']}]{extra}"
        if "var" in a:
            return f"{a['var']} {a['direction']}"
        if "atom" in a:
            return a["atom"]
        if "coordinate" in a:
            return f"goal {a['side']} coordinate {a['coordinate']}"
        return ""


@dataclass
class Trace:
    initial: tuple[System, ...] = ()
    steps: list[Step] = field(default_factory=list)

    def render(self) -> str:
        lines = []
        for k, sys in enumerate(self.initial):
            lines.append(f"system {k}")
            lines.append(sys.render())
        for n, step in enumerate(self.steps, 1):
            lines.append(f"step {n} rule {step.rule} at {step.location()} (system {step.system_index})")
            lines.append(step.after.render())
        return "\n".join(lines)


def apply_rule(sys: System, rule: str, args: Mapping[str, Any], sig: Signature) -> tuple[System, bool | None, bool]:
    """Dispatch by rule name; returns ``(system, pivotal, touches_side_condition)``."""
    if rule == "approximation":
        new, piv = approximate(sys, args["flavor"], tuple(args["path"]), sig, args.get("pivotal", True))
        return new, piv, False
    if rule == "residuation":
        new, touched = residuate(sys, args["index"], args["coordinate"], sig, args.get("side"))
        return new, None, touched
    if rule == "splitting":
        new, touched = split(sys, args["index"], args.get("side"))
        return new, None, touched
    if rule == "ackermann":
        return ackermann(sys, args["var"], args["direction"], sig), None, False
    if rule == "goal-residuation":
        return residuate_goal(sys, args["coordinate"], sig, args["side"]), None, False
    if rule == "compaction":
        name = args["atom"]
        atom = Nom(name[1:]) if name.startswith("#") else CoNom(name[1:])
        return eliminate_atom(sys, atom), None, False
    raise RuleError(f"unknown rule {rule!r}")


def record(trace: Trace, systems: list[System], k: int, rule: str, sig: Signature, **args: Any) -> System:
    """Apply a rule to ``systems[k]`` and append the step to ``trace``."""
    before = systems[k]
    after, piv, touched = apply_rule(before, rule, args, sig)
    trace.steps.append(Step(rule, dict(args), k, before, after, piv, touched))
    systems[k] = after
    return after


def replay(trace: Trace, sig: Signature) -> list[System]:
    """Re-apply every step from the initial systems, checking each recorded state."""
    systems = list(trace.initial)
    for n, step in enumerate(trace.steps, 1):
        if systems[step.system_index] != step.before:
            raise RuleError(f"step {n}: recorded state does not match the replay")
        after, _, _ = apply_rule(step.before, step.rule, step.args, sig)
        if after != step.after:
            raise RuleError(f"step {n}: replay produced a different system")
        systems[step.system_index] = after
    return systems
