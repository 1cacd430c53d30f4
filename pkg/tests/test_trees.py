import pytest

from alba.errors import NotALeaf
from alba.syntax import TOP, Inequality, Pol, Polarity, Var, parse_inequality, parse_term
from alba.trees import (
    NodeClass,
    analyze_branch,
    build_signed_tree,
    critical_occurrences,
    dump_tree,
    inequality_trees,
    leaves,
    node_at,
    node_class,
    uniform_sign,
)

D, I = Pol.DUAL, Pol.ONE


def _shape(node):
    return (node.sign, node.label, [_shape(c) for c in node.children])


def test_frege_lhs_tree(frege, frege_sig):
    lhs, _ = inequality_trees(frege, frege_sig)
    assert _shape(lhs) == ("+", "->", [("-", "p", []), ("+", "->", [("-", "q", []), ("+", "r", [])])])


def test_frege_rhs_tree(frege, frege_sig):
    _, rhs = inequality_trees(frege, frege_sig)
    assert rhs.sign == "-" and rhs.label == "->"
    assert [(c.sign, c.label) for c in rhs.children] == [("+", "->"), ("-", "->")]
    assert [(leaf.sign, leaf.label) for leaf in leaves(rhs)] == [("-", "p"), ("+", "q"), ("+", "p"), ("-", "r")]


def test_constant_tree():
    tree = build_signed_tree(TOP, "+", None)
    assert tree.children == () and tree.sign == "+" and tree.node_class is NodeClass.LEAF


def test_node_classes(frege_sig, modal_sig):
    imp = parse_term("p -> q", frege_sig)
    assert node_class(imp, "+", frege_sig) is NodeClass.SRR
    assert node_class(imp, "-", frege_sig) is NodeClass.SAC
    join = parse_term("p \\/ q", frege_sig)
    assert node_class(join, "+", frege_sig) is NodeClass.DELTA_ADJOINT
    assert node_class(join, "-", frege_sig) is NodeClass.SMP
    meet = parse_term("p /\\ q", frege_sig)
    assert node_class(meet, "-", frege_sig) is NodeClass.DELTA_ADJOINT
    assert node_class(meet, "+", frege_sig) is NodeClass.SMP
    assert node_class(parse_term("dia(p)", modal_sig), "+", modal_sig) is NodeClass.SAC
    assert node_class(parse_term("dia(p)", modal_sig), "-", modal_sig) is NodeClass.SMP
    assert node_class(parse_term("box(p)", modal_sig), "+", modal_sig) is NodeClass.SMP
    assert node_class(parse_term("rbox(p)", modal_sig), "-", modal_sig) is NodeClass.SAC


def test_branch_under_one_pia_node(frege, frege_sig):
    _, rhs = inequality_trees(frege, frege_sig)
    rep = analyze_branch(rhs, (0, 1))  # +q
    assert rep.p1 == ((0,),) and rep.p2 == ((),)
    assert rep.good and not rep.excellent
    assert node_at(rhs, (0,)).node_class is NodeClass.SRR
    assert node_at(rhs, ()).node_class is NodeClass.SAC


def test_skeleton_branch(frege, frege_sig):
    _, rhs = inequality_trees(frege, frege_sig)
    rep = analyze_branch(rhs, (1, 1))  # -r
    assert rep.p1 == () and rep.p2 == ((), (1,))
    assert rep.is_skeleton and rep.is_sac


def test_trivial_branch(frege_sig):
    tree = build_signed_tree(Var("p"), "+", frege_sig)
    rep = analyze_branch(tree, ())
    assert rep.good and rep.excellent and rep.is_skeleton


def test_analyze_branch_needs_a_leaf(frege, frege_sig):
    _, rhs = inequality_trees(frege, frege_sig)
    with pytest.raises(NotALeaf):
        analyze_branch(rhs, (0,))


def test_uniform_sign(frege, frege_sig):
    assert uniform_sign(parse_inequality("bot <= p", frege_sig), "p", frege_sig) is Polarity.NEGATIVE
    assert uniform_sign(parse_inequality("p <= p", frege_sig), "p", frege_sig) is Polarity.BOTH
    assert uniform_sign(frege, "p", frege_sig) is Polarity.BOTH


def test_critical_occurrences_frege(frege, frege_sig):
    occ = critical_occurrences(frege, {"p": I, "q": I, "r": D}, frege_sig)
    assert {(o.side, o.var, o.sign) for o in occ} == {("rhs", "q", "+"), ("rhs", "p", "+"), ("rhs", "r", "-")}
    assert len(occ) == 3


def test_critical_occurrences_small(frege_sig):
    occ = critical_occurrences(parse_inequality("p /\\ q <= p", frege_sig), {"p": I, "q": I}, frege_sig)
    assert [(o.side, o.var, o.sign) for o in occ] == [("lhs", "p", "+"), ("lhs", "q", "+")]
    assert critical_occurrences(Inequality(TOP, TOP), {}, frege_sig) == []


def test_dump_tree_format(frege, frege_sig):
    lhs, _ = inequality_trees(frege, frege_sig)
    lines = dump_tree(lhs).splitlines()
    assert lines[0] == "/ + SRR ->"
    assert lines[1] == "/0 - leaf p"
    assert len(lines) == 5
