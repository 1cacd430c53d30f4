"""The ALBA runner: strategic (certificate-guided) and exhaustive search."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from alba.classify import Certificate, find_inductive_certificate, is_inductive
from alba.engine.checks import has_critical, in_solved_form
from alba.engine.preprocess import preprocess
from alba.engine.system import SIDES, System, Trace, apply_rule, record, residuate_goal
from alba.errors import AlbaError, RuleError, TooManyVariables
from alba.syntax.parser import format_quasi
from alba.syntax.signature import Pol, Signature, expand_signature, slot_is_down
from alba.syntax.terms import (
    App,
    CoNom,
    Inequality,
    Join,
    Meet,
    Nom,
    QuasiInequality,
    Term,
    atoms,
    child_signs,
    children,
    in_base_language,
    ineq_atoms,
    is_pure,
    positions,
)
from alba.trees import NodeClass, build_signed_tree, is_critical, leaves, node_class


class Mode(str, Enum):
    STRATEGIC = "strategic"
    EXHAUSTIVE = "exhaustive"


class Status(str, Enum):
    SUCCESS = "SUCCESS"
    FAILURE = "FAILURE"


@dataclass
class RunResult:
    status: Status
    outputs: list[QuasiInequality] = field(default_factory=list)
    trace: Trace = field(default_factory=Trace)
    certificate: Certificate | None = None
    reason: str | None = None
    systems: list[System] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.status is Status.SUCCESS

    def render(self) -> str:
        if not self.ok:
            return f"FAILURE {self.reason}"
        return "\n".join(format_quasi(q) for q in self.outputs)


class _Stuck(Exception):
    pass


DEFAULT_DEPTH = 64
SEARCH_BUDGET = 20000


def run(
    ineq: Inequality,
    sig: Signature,
    mode: Mode | str = Mode.STRATEGIC,
    pivotal: bool = True,
    max_depth: int = DEFAULT_DEPTH,
    certificate: Certificate | None = None,
) -> RunResult:
    """Run ALBA on a base-language inequality.  Failures are reported in-band."""
    mode = Mode(mode)
    sig = expand_signature(sig)
    if not (in_base_language(ineq.lhs, sig) and in_base_language(ineq.rhs, sig)):
        return RunResult(Status.FAILURE, reason="input is not in the base language")
    cert = certificate
    if mode is Mode.STRATEGIC and cert is None:
        try:
            cert = find_inductive_certificate(ineq, sig)
        except TooManyVariables as exc:
            return RunResult(Status.FAILURE, reason=str(exc))
        if cert is None:
            return RunResult(Status.FAILURE, reason="not inductive")
    parts = preprocess(ineq, sig)
    systems = [System.initial(p) for p in parts]
    trace = Trace(initial=tuple(systems))
    try:
        for k, part in enumerate(parts):
            if mode is Mode.STRATEGIC:
                local = cert
                if not is_inductive(part, local, sig):
                    local = find_inductive_certificate(part, sig)
                    if local is None:
                        raise _Stuck(f"preprocessed part {k} is not inductive")
                _strategic(systems, k, local, sig, trace)
            else:
                _exhaustive(systems, k, sig, trace, pivotal, max_depth)
            _compact(systems, k, sig, trace)
    except _Stuck as exc:
        return RunResult(Status.FAILURE, trace=trace, certificate=cert, reason=str(exc), systems=systems)
    except AlbaError as exc:
        return RunResult(Status.FAILURE, trace=trace, certificate=cert, reason=f"rule error: {exc}", systems=systems)
    outputs = [s.to_quasi() for s in systems]
    return RunResult(Status.SUCCESS, outputs, trace, cert, systems=systems)


# -- strategic mode ----------------------------------------------------------


def _approximation_site(sys: System, sig: Signature) -> tuple[str, tuple[int, ...]] | None:
    """First non-SAC node (preorder, lhs then rhs) with variables below a SAC branch."""

    def walk(t: Term, sign: str, path: tuple[int, ...]):
        if is_pure(t):
            return None
        if node_class(t, sign, sig) is not NodeClass.SAC:
            return sign, path
        for i, (c, s) in enumerate(zip(children(t), child_signs(t, sign, sig))):
            hit = walk(c, s, path + (i,))
            if hit:
                return hit
        return None

    for side, t, sign in (("L", sys.goal.lhs, "+"), ("R", sys.goal.rhs, "-")):
        hit = walk(t, sign, ())
        if hit:
            return side + hit[0], hit[1]
    return None


def _strip(systems: list[System], k: int, sig: Signature, trace: Trace) -> None:
    while True:
        site = _approximation_site(systems[k], sig)
        if site is None:
            return
        flavor, path = site
        record(trace, systems, k, "approximation", sig, flavor=flavor, path=path)


def _critical_coordinate(t: App, var: str, pol: Pol, sign: str, sig: Signature) -> int | None:
    eps = {var: pol}
    tree = build_signed_tree(t, sign, sig)
    for i, child in enumerate(tree.children, 1):
        if any(is_critical(leaf, eps) for leaf in leaves(child)):
            return i
    return None


def _make_ready(systems: list[System], k: int, var: str, pol: Pol, sig: Signature, trace: Trace) -> None:
    """Residuate and split until every critical occurrence of ``var`` is solved."""
    while True:
        sys = systems[k]
        work = None
        for idx, m in enumerate(sys.members):
            if has_critical(m.ineq, var, pol, sig) and not in_solved_form(m.ineq, var, pol):
                work = idx
                break
        if work is None:
            return
        lhs, rhs = sys.members[work].ineq
        if is_pure(rhs):
            side, t, sign = "lhs", lhs, "-"
        elif is_pure(lhs):
            side, t, sign = "rhs", rhs, "+"
        else:
            raise _Stuck(f"member {work} has variables on both sides")
        if (side == "lhs" and isinstance(t, Join)) or (side == "rhs" and isinstance(t, Meet)):
            record(trace, systems, k, "splitting", sig, index=work, side=side)
            continue
        if isinstance(t, App) and t.args and sig[t.conn].is_f == (side == "lhs"):
            coord = _critical_coordinate(t, var, pol, sign, sig)
            if coord is None:
                raise _Stuck(f"no critical coordinate in member {work}")
            record(trace, systems, k, "residuation", sig, index=work, coordinate=coord, side=side)
            continue
        raise _Stuck(f"member {work} cannot be brought into Ackermann shape for {var}")


def _strategic(systems: list[System], k: int, cert: Certificate, sig: Signature, trace: Trace) -> None:
    _strip(systems, k, sig, trace)
    while True:
        present = systems[k].variables()
        if not present:
            return
        var = cert.minimal(present)[0]
        pol = cert.epsilon.get(var, Pol.ONE)
        _make_ready(systems, k, var, pol, sig, trace)
        direction = "right" if pol is Pol.ONE else "left"
        try:
            record(trace, systems, k, "ackermann", sig, var=var, direction=direction)
        except RuleError as exc:
            raise _Stuck(f"Ackermann rule not applicable to {var}: {exc}") from None


# -- exhaustive mode ---------------------------------------------------------


def _moves(sys: System, sig: Signature, pivotal: bool):
    for var in sorted(sys.variables()):
        for direction in ("right", "left"):
            yield "ackermann", {"var": var, "direction": direction}
    for flavor_side, t in (("L", sys.goal.lhs), ("R", sys.goal.rhs)):
        for path, sub in positions(t):
            if is_pure(sub):
                continue
            for sign in "+-":
                yield "approximation", {"flavor": flavor_side + sign, "path": path, "pivotal": pivotal}
    for idx, m in enumerate(sys.members):
        if m.pure:
            continue
        for side in SIDES:
            yield "splitting", {"index": idx, "side": side}
        for side, t in zip(SIDES, m.ineq):
            if isinstance(t, App):
                for coord, arg in enumerate(t.args, 1):
                    if not is_pure(arg):
                        yield "residuation", {"index": idx, "coordinate": coord, "side": side}


def _exhaustive(systems, k, sig, trace, pivotal, max_depth) -> None:
    visited: set = set()
    budget = [SEARCH_BUDGET]

    def dfs(sys: System, depth: int):
        if sys.is_pure():
            return []
        if depth >= max_depth or budget[0] <= 0:
            return None
        key = sys.key()
        if key in visited:
            return None
        visited.add(key)
        budget[0] -= 1
        for rule, args in _moves(sys, sig, pivotal):
            try:
                after, piv, touched = apply_rule(sys, rule, args, sig)
            except RuleError:
                continue
            if touched:
                continue
            rest = dfs(after, depth + 1)
            if rest is not None:
                return [(rule, args)] + rest
        return None

    path = dfs(systems[k], 0)
    if path is None:
        raise _Stuck("exhaustive search found no pure system")
    for rule, args in path:
        record(trace, systems, k, rule, sig, **args)


# -- output compaction -------------------------------------------------------


def _display_plan(goal: Inequality, atom, sig: Signature) -> list[dict] | None:
    """Goal residuations that isolate ``atom`` on its own side, if possible."""
    occ = [(side, p) for side, t in zip(SIDES, goal) for p, s in positions(t) if s == atom]
    if len(occ) != 1:
        return None
    side, path = occ[0]
    plan = []
    while path:
        head = goal.lhs if side == "lhs" else goal.rhs
        if not isinstance(head, App):
            return None
        conn = sig[head.conn]
        if conn.is_regular or conn.is_f != (side == "lhs") or sig.family_member(conn.name) is None:
            return None
        coord = path[0] + 1
        step = {"coordinate": coord, "side": side}
        goal = residuate_goal(System((), goal), coord, sig, side).goal
        root_name, slot = sig.family_member(conn.name)
        target = 0 if (slot and coord == slot) else coord
        side = "lhs" if slot_is_down(sig[root_name], target) else "rhs"
        path = path[1:]
        plan.append(step)
    want = "lhs" if isinstance(atom, Nom) else "rhs"
    return plan if side == want else None


def _compact(systems: list[System], k: int, sig: Signature, trace: Trace) -> None:
    progress = True
    while progress:
        progress = False
        sys = systems[k]
        candidates = sorted(
            (a for a in ineq_atoms(sys.goal) if isinstance(a, (Nom, CoNom))),
            key=lambda a: (isinstance(a, CoNom), a.name),
        )
        for atom in candidates:
            holders = [m for m in sys.members if atom in ineq_atoms(m.ineq)]
            if len(holders) != 1 or holders[0].side_condition:
                continue
            lhs, rhs = holders[0].ineq
            if isinstance(atom, Nom) and (lhs != atom or atom in atoms(rhs)):
                continue
            if isinstance(atom, CoNom) and (rhs != atom or atom in atoms(lhs)):
                continue
            plan = _display_plan(sys.goal, atom, sig)
            if plan is None:
                continue
            for step in plan:
                record(trace, systems, k, "goal-residuation", sig, **step)
            prefix = "#" if isinstance(atom, Nom) else "@"
            record(trace, systems, k, "compaction", sig, atom=prefix + atom.name)
            progress = True
            break


__all__ = ["Mode", "RunResult", "Status", "run"]
