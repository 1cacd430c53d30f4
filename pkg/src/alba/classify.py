"""Sahlqvist, inductive and definite inequalities; certificate search."""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

from alba.errors import NotInductive, TooManyVariables, UncoveredVariable
from alba.syntax.signature import Pol, Signature
from alba.syntax.terms import Inequality, Path, Var, ineq_variables
from alba.trees import (
    BranchReport,
    NodeClass,
    SignedNode,
    analyze_branch,
    inequality_trees,
    is_critical,
    leaves,
    node_at,
)

MAX_CERTIFICATE_VARS = 16


def transitive_closure(pairs: Iterable[tuple[str, str]]) -> frozenset[tuple[str, str]]:
    rel = set(pairs)
    while True:
        extra = {(a, d) for (a, b) in rel for (c, d) in rel if b == c} - rel
        if not extra:
            return frozenset(rel)
        rel |= extra


@dataclass(frozen=True)
class Certificate:
    """An order-type ``epsilon`` on variables and a strict order ``omega``.

    ``omega`` holds pairs ``(lower, upper)`` and must be irreflexive and
    transitive.
    """

    epsilon: Mapping[str, Pol]
    omega: frozenset[tuple[str, str]] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        object.__setattr__(self, "epsilon", dict(self.epsilon))
        object.__setattr__(self, "omega", frozenset(self.omega))
        if any(a == b for a, b in self.omega):
            raise ValueError("omega must be irreflexive")
        if transitive_closure(self.omega) != self.omega:
            raise ValueError("omega must be transitive")

    def __hash__(self) -> int:
        return hash((tuple(sorted(self.epsilon.items())), self.omega))

    def below(self, lower: str, upper: str) -> bool:
        return (lower, upper) in self.omega

    def minimal(self, among: Iterable[str]) -> list[str]:
        pool = set(among)
        return sorted(v for v in pool if not any((u, v) in self.omega for u in pool))

    def describe(self) -> str:
        eps = " ".join(f"{v}={p.value}" for v, p in sorted(self.epsilon.items()))
        om = " ".join(f"{a}<{b}" for a, b in sorted(self.omega))
        return f"eps {eps} omega {om}".rstrip()


@dataclass(frozen=True)
class SRRCheck:
    """Condition 2 at one SRR node of a critical branch."""

    leaf_path: Path = ()
    node_path: Path = ()
    sibling: int = 0
    agrees: bool = True  # every variable leaf is eps^d-critical
    below: tuple[tuple[str, str], ...] = ()  # required omega pairs


@dataclass(frozen=True)
class Verdict:
    holds: bool
    reports: tuple[tuple[str, BranchReport], ...] = ()
    srr_checks: tuple[tuple[str, SRRCheck], ...] = ()
    violation: str | None = None
    side: str | None = None
    path: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.holds


def _sibling_check(
    node: SignedNode, branch_child: int, target: str, eps: Mapping[str, Pol], leaf_path: Path
) -> list[SRRCheck]:
    out = []
    for h, child in enumerate(node.children):
        if h == branch_child:
            continue
        agrees = True
        below = set()
        for leaf in leaves(child):
            if isinstance(leaf.term, Var):
                name = leaf.term.name
                if name not in eps:
                    raise UncoveredVariable(f"no order-type entry for {name!r}")
                if is_critical(leaf, eps):
                    agrees = False
                below.add((name, target))
        out.append(SRRCheck(leaf_path, node.path, h, agrees, tuple(sorted(below))))
    return out


def _critical_analysis(tree: SignedNode, eps: Mapping[str, Pol]):
    """Yield ``(leaf, report, srr_checks)`` for every critical leaf of ``tree``."""
    for leaf in leaves(tree):
        if not is_critical(leaf, eps):
            continue
        report = analyze_branch(tree, leaf.path)
        checks: list[SRRCheck] = []
        node = tree
        for i in leaf.path:
            if node.node_class is NodeClass.SRR:
                checks.extend(_sibling_check(node, i, leaf.term.name, eps, leaf.path))
            node = node.children[i]
        yield leaf, report, checks


def _check_trees(
    trees: Iterable[tuple[str, SignedNode]], cert: Certificate, *, omega_given: bool = True
) -> tuple[Verdict, set[tuple[str, str]]]:
    reports, srr, needed = [], [], set()
    for side, tree in trees:
        for leaf, report, checks in _critical_analysis(tree, cert.epsilon):
            reports.append((side, report))
            if not report.good:
                return Verdict(False, tuple(reports), tuple(srr), "branch not good", side, leaf.path), needed
            for chk in checks:
                srr.append((side, chk))
                if not chk.agrees:
                    return Verdict(False, tuple(reports), tuple(srr), "side argument not eps^d-uniform", side, chk.node_path), needed
                for pair in chk.below:
                    needed.add(pair)
                    if omega_given and pair not in cert.omega:
                        return Verdict(False, tuple(reports), tuple(srr), f"needs {pair[0]} < {pair[1]} in omega", side, chk.node_path), needed
    return Verdict(True, tuple(reports), tuple(srr)), needed


def _require_cover(ineq: Inequality, eps: Mapping[str, Pol]) -> None:
    missing = ineq_variables(ineq) - set(eps)
    if missing:
        raise UncoveredVariable(f"no order-type entry for {sorted(missing)}")


def is_inductive(ineq: Inequality, cert: Certificate, sig: Signature) -> Verdict:
    _require_cover(ineq, cert.epsilon)
    lhs, rhs = inequality_trees(ineq, sig)
    verdict, _ = _check_trees((("lhs", lhs), ("rhs", rhs)), cert)
    return verdict


def tree_is_inductive(tree: SignedNode, cert: Certificate) -> Verdict:
    verdict, _ = _check_trees((("tree", tree),), cert)
    return verdict


def is_sahlqvist(ineq: Inequality, eps: Mapping[str, Pol], sig: Signature) -> Verdict:
    _require_cover(ineq, eps)
    reports = []
    for side, tree in zip(("lhs", "rhs"), inequality_trees(ineq, sig)):
        for leaf in leaves(tree):
            if is_critical(leaf, eps):
                rep = analyze_branch(tree, leaf.path)
                reports.append((side, rep))
                if not rep.excellent:
                    return Verdict(False, tuple(reports), violation="branch not excellent", side=side, path=leaf.path)
    return Verdict(True, tuple(reports))


def epsilon_candidates(names: list[str]) -> Iterable[dict[str, Pol]]:
    """Lexicographic over sorted names, with d tried before 1."""
    for combo in itertools.product((Pol.DUAL, Pol.ONE), repeat=len(names)):
        yield dict(zip(names, combo))


def find_inductive_certificate(
    ineq: Inequality, sig: Signature, max_vars: int = MAX_CERTIFICATE_VARS
) -> Certificate | None:
    names = sorted(ineq_variables(ineq))
    if len(names) > max_vars:
        raise TooManyVariables(f"{len(names)} variables exceed the limit of {max_vars}")
    trees = tuple(zip(("lhs", "rhs"), inequality_trees(ineq, sig)))
    for eps in epsilon_candidates(names):
        probe = Certificate(eps)
        verdict, needed = _check_trees(trees, probe, omega_given=False)
        if not verdict.holds:
            continue
        omega = transitive_closure(needed)
        if any(a == b for a, b in omega):
            continue
        return Certificate(eps, omega)
    return None


def is_definite(ineq: Inequality, cert: Certificate, sig: Signature) -> bool:
    """Inductive, and no Delta-adjoint node on the skeleton part of a critical branch."""
    verdict = is_inductive(ineq, cert, sig)
    if not verdict.holds:
        raise NotInductive(verdict.violation or "not inductive")
    trees = dict(zip(("lhs", "rhs"), inequality_trees(ineq, sig)))
    for side, rep in verdict.reports:
        tree = trees[side]
        if any(node_at(tree, p).node_class is NodeClass.DELTA_ADJOINT for p in rep.p2):
            return False
    return True


__all__ = [
    "Certificate",
    "SRRCheck",
    "Verdict",
    "epsilon_candidates",
    "find_inductive_certificate",
    "is_definite",
    "is_inductive",
    "is_sahlqvist",
    "transitive_closure",
    "tree_is_inductive",
]
