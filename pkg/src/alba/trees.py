"""Signed generation trees, node classification and branch analysis.

The lhs of an inequality is read as a ``+`` tree and the rhs as a ``-``
tree.  Each node is classified as Skeleton (Delta-adjoint or SAC), PIA
(SRR or SMP) or a leaf.  The classes are disjoint.
"""

from __future__ import annotations

from collections.abc import Iterator, Mapping
from dataclasses import dataclass
from enum import Enum

from alba.errors import NotALeaf
from alba.syntax.signature import Pol, Signature
from alba.syntax.terms import (
    App,
    Inequality,
    Join,
    Meet,
    Path,
    Polarity,
    Term,
    Var,
    child_signs,
    children,
)


class NodeClass(Enum):
    DELTA_ADJOINT = "delta-adjoint"
    SAC = "SAC"
    SRR = "SRR"
    SMP = "SMP"
    LEAF = "leaf"

    @property
    def is_skeleton(self) -> bool:
        return self in (NodeClass.DELTA_ADJOINT, NodeClass.SAC)

    @property
    def is_pia(self) -> bool:
        return self in (NodeClass.SRR, NodeClass.SMP)


def node_class(t: Term, sign: str, sig: Signature) -> NodeClass:
    if isinstance(t, Join):
        return NodeClass.DELTA_ADJOINT if sign == "+" else NodeClass.SMP
    if isinstance(t, Meet):
        return NodeClass.DELTA_ADJOINT if sign == "-" else NodeClass.SMP
    if isinstance(t, App) and t.args:
        conn = sig[t.conn]
        # +f and -g are SAC
        if conn.is_f == (sign == "+"):
            return NodeClass.SAC
        if conn.is_normal and conn.arity >= 2:
            return NodeClass.SRR
        return NodeClass.SMP
    return NodeClass.LEAF


@dataclass(frozen=True)
class SignedNode:
    path: Path
    sign: str
    term: Term
    node_class: NodeClass
    children: tuple[SignedNode, ...]

    @property
    def label(self) -> str:
        t = self.term
        if isinstance(t, Join):
            return "\\/"
        if isinstance(t, Meet):
            return "/\\"
        if isinstance(t, App):
            return t.conn
        from alba.syntax.parser import format_term

        return format_term(t)


def build_signed_tree(t: Term, root_sign: str, sig: Signature, prefix: Path = ()) -> SignedNode:
    kids = tuple(
        build_signed_tree(c, s, sig, prefix + (i,))
        for i, (c, s) in enumerate(zip(children(t), child_signs(t, root_sign, sig)))
    )
    return SignedNode(prefix, root_sign, t, node_class(t, root_sign, sig), kids)


def inequality_trees(ineq: Inequality, sig: Signature) -> tuple[SignedNode, SignedNode]:
    return build_signed_tree(ineq.lhs, "+", sig), build_signed_tree(ineq.rhs, "-", sig)


def classify_node(node: SignedNode) -> NodeClass:
    return node.node_class


def iter_nodes(tree: SignedNode) -> Iterator[SignedNode]:
    yield tree
    for c in tree.children:
        yield from iter_nodes(c)


def node_at(tree: SignedNode, path: Path) -> SignedNode:
    for i in path:
        tree = tree.children[i]
    return tree


def branch_nodes(tree: SignedNode, path: Path) -> list[SignedNode]:
    """Nodes from the root down to (excluding) the node at ``path``."""
    out = []
    node = tree
    for i in path:
        out.append(node)
        node = node.children[i]
    return out


@dataclass(frozen=True)
class BranchReport:
    leaf_path: Path
    p1: tuple[Path, ...]  # leaf-side PIA segment, listed root-first
    p2: tuple[Path, ...]  # root-side remainder
    good: bool
    excellent: bool
    is_skeleton: bool
    is_sac: bool


def analyze_branch(tree: SignedNode, leaf_path: Path) -> BranchReport:
    leaf = node_at(tree, leaf_path)
    if leaf.children:
        raise NotALeaf(f"position {leaf_path} is not a leaf")
    nodes = branch_nodes(tree, leaf_path)
    k = len(nodes)
    while k > 0 and nodes[k - 1].node_class.is_pia:
        k -= 1
    p2, p1 = nodes[:k], nodes[k:]
    good = all(n.node_class.is_skeleton for n in p2)
    return BranchReport(
        leaf_path=leaf_path,
        p1=tuple(n.path for n in p1),
        p2=tuple(n.path for n in p2),
        good=good,
        excellent=good and all(n.node_class is NodeClass.SMP for n in p1),
        is_skeleton=good and not p1,
        is_sac=good and all(n.node_class is NodeClass.SAC for n in p2),
    )


def leaves(tree: SignedNode) -> Iterator[SignedNode]:
    for n in iter_nodes(tree):
        if not n.children:
            yield n


def is_critical(node: SignedNode, eps: Mapping[str, Pol]) -> bool:
    """``+p`` with eps(p) = 1, or ``-p`` with eps(p) = d."""
    t = node.term
    if not isinstance(t, Var) or t.name not in eps:
        return False
    return (node.sign == "+") == (eps[t.name] is Pol.ONE)


@dataclass(frozen=True)
class Occurrence:
    var: str
    side: str  # "lhs" or "rhs"
    path: Path
    sign: str


def critical_occurrences(ineq: Inequality, eps: Mapping[str, Pol], sig: Signature) -> list[Occurrence]:
    out = []
    for side, tree in zip(("lhs", "rhs"), inequality_trees(ineq, sig)):
        for leaf in leaves(tree):
            if is_critical(leaf, eps):
                out.append(Occurrence(leaf.term.name, side, leaf.path, leaf.sign))
    return out


def uniform_sign(ineq: Inequality, v: str, sig: Signature) -> Polarity:
    """Sign with which ``v`` occurs across the ``+lhs`` and ``-rhs`` trees."""
    signs = set()
    for tree in inequality_trees(ineq, sig):
        for leaf in leaves(tree):
            if leaf.term == Var(v):
                signs.add(leaf.sign)
    return Polarity.of(signs)


def format_path(path: Path) -> str:
    return "/" + "/".join(str(i) for i in path)


def dump_tree(tree: SignedNode) -> str:
    """One line per node: ``<path> <sign> <class> <label>``."""
    lines = []
    for n in iter_nodes(tree):
        lines.append(f"{format_path(n.path)} {n.sign} {n.node_class.value} {n.label}")
    return "\n".join(lines)
