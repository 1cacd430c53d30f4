import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alba.corpus import random_inductive, random_signature
from alba.errors import LawViolation, ModelError, NotALattice
from alba.models import (
    Lattice,
    ackermann_instance_holds,
    adjunction_violations,
    check_validity,
    complete_preservation_violations,
    distribution_violations,
    dual_model,
    enumerate_lattices,
    equivalence_oracle,
    eval_term,
    format_model,
    interpret_expanded,
    law_violations,
    model_pool,
    normalization_identity_violations,
    parse_model,
    sigma_pi_violations,
    validate_model,
)
from alba.syntax import (
    BOT,
    TOP,
    Inequality,
    Nom,
    QuasiInequality,
    Var,
    dual_inequality,
    dual_signature,
    expand_signature,
    parse_inequality,
    parse_term,
    validate_signature,
)
from tests.conftest import DATA, FREGE_GOLDEN

BOOL_IMP = {(0, 0): 1, (0, 1): 1, (1, 0): 0, (1, 1): 1}


@pytest.fixture(scope="module")
def bool2(frege_sig):
    return validate_model(2, [(0, 1)], {"->": BOOL_IMP}, frege_sig, "bool2")


@pytest.fixture(scope="module")
def const_top(frege_sig):
    return validate_model(2, [(0, 1)], {"->": {k: 1 for k in BOOL_IMP}}, frege_sig, "top")


DIA = validate_signature([("dia", "fn", 1, "1")])
# the four-element Boolean lattice: 0 < a, b < 1
SQUARE = [(0, 1), (0, 2), (1, 3), (2, 3)]


# -- lattices and laws ------------------------------------------------------------


def test_lattice_counts_per_size():
    sizes = [lat.size for lat in enumerate_lattices(6)]
    assert [sizes.count(n) for n in range(1, 7)] == [1, 1, 1, 2, 5, 15]


def test_lattice_rejects_non_lattices():
    leq = np.eye(4, dtype=bool)
    leq[0, :] = True
    leq[1, 3] = leq[2, 3] = True
    leq[1, 2] = True
    leq[2, 1] = True  # antisymmetry fails
    with pytest.raises(NotALattice):
        Lattice(leq)
    with pytest.raises(NotALattice):
        Lattice.from_pairs(3, [(0, 1), (0, 2)])  # no top


def test_boolean_implication_is_valid(bool2):
    assert law_violations(bool2) == []


def test_constant_top_implication_is_valid(const_top):
    assert law_violations(const_top) == []


def test_non_additive_diamond_rejected():
    with pytest.raises(LawViolation) as err:
        validate_model(4, SQUARE, {"dia": [0, 0, 0, 3]}, DIA)
    assert err.value.witness


def test_model_needs_every_table(frege_sig):
    with pytest.raises(ModelError):
        validate_model(2, [(0, 1)], {}, frege_sig)


def test_bullet_is_conjunction_on_bool2(bool2):
    em = interpret_expanded(bool2)
    assert np.array_equal(em.ops["->b2"], em.meet)


def test_normalization_of_regular_diamond():
    sig = validate_signature([("f", "fr", 1, "1")])
    m = validate_model(2, [(0, 1)], {"f": [1, 1]}, sig)
    em = interpret_expanded(m)
    assert list(em.ops["dia_f"]) == [0, 1]
    assert normalization_identity_violations(m) == []


def test_normalization_of_identity_is_identity():
    sig = validate_signature([("f", "fr", 1, "1")])
    m = validate_model(3, [(0, 1), (1, 2)], {"f": [0, 1, 2]}, sig)
    assert list(interpret_expanded(m).ops["dia_f"]) == [0, 1, 2]


# -- evaluation and validity ------------------------------------------------------------


def test_eval_examples(bool2, frege_sig):
    assert eval_term(parse_term("p /\\ q", frege_sig), bool2, {Var("p"): 1, Var("q"): 0}) == 0
    t = parse_term("p -> (q -> r)", frege_sig)
    assert eval_term(t, bool2, {Var("p"): 1, Var("q"): 1, Var("r"): 0}) == 0
    assert eval_term(parse_term("#j1 \\/ bot", frege_sig), bool2, {Nom("j1"): 1}) == 1


def test_frege_valid_on_bool2(frege, bool2):
    v = check_validity(frege, bool2)
    assert v.valid and v.assignments == 8


def test_lattice_order_is_valid_everywhere(frege_sig):
    ineq = parse_inequality("p /\\ q <= p \\/ q", frege_sig)
    for m in model_pool(frege_sig, max_size=5, per_lattice=1):
        assert check_validity(ineq, m).valid


def test_diamond_meet_counterexample():
    m = validate_model(4, SQUARE, {"dia": [0, 3, 3, 3]}, DIA)
    assert check_validity(parse_inequality("dia(p /\\ q) <= dia(p) /\\ dia(q)", DIA), m).valid
    v = check_validity(parse_inequality("dia(p) /\\ dia(q) <= dia(p /\\ q)", DIA), m)
    assert not v.valid
    p, q = v.counterexample[Var("p")], v.counterexample[Var("q")]
    assert m.lattice.meet[p, q] == m.bot and p != m.bot and q != m.bot


@pytest.fixture(scope="module")
def golden(frege_sig):
    return [QuasiInequality((), parse_inequality(FREGE_GOLDEN, expand_signature(frege_sig)))]


def test_oracle_on_bool2(frege, bool2, golden):
    verdict = equivalence_oracle(frege, golden, bool2)
    assert verdict.equivalent and verdict.input_valid and verdict.outputs_valid


def test_oracle_on_constant_top(frege, const_top, golden):
    verdict = equivalence_oracle(frege, golden, const_top)
    assert verdict.equivalent and verdict.input_valid


def test_oracle_trivial(frege_sig, bool2):
    ineq = Inequality(BOT, TOP)
    assert equivalence_oracle(ineq, [QuasiInequality((), ineq)], bool2).equivalent


def test_oracle_detects_a_wrong_output(frege, frege_sig):
    wrong = [QuasiInequality((), parse_inequality("#j <= @m", frege_sig))]
    found = [v for m in model_pool(frege_sig, max_size=3, per_lattice=2) if not (v := equivalence_oracle(frege, wrong, m))]
    assert found and found[0].witness_side == "output"


def test_oracle_against_itself(frege, frege_sig):
    for m in model_pool(frege_sig, max_size=4, per_lattice=2, seed=9):
        assert equivalence_oracle(frege, [QuasiInequality((), frege)], m).equivalent


# -- degenerate canonical extensions and preservation -------------------------------------


def test_sigma_pi_and_preservation_on_chains(modal_sig):
    for m in model_pool(modal_sig, max_size=5, per_lattice=2, seed=1):
        assert sigma_pi_violations(m) == []
        assert complete_preservation_violations(m) == []
        assert adjunction_violations(m) == []
        assert normalization_identity_violations(m) == []


def test_constant_top_is_its_own_extension(const_top):
    assert sigma_pi_violations(const_top) == []


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_random_models_satisfy_laws(seed):
    sig = validate_signature([("f", "fn", 2, "1d"), ("g", "gn", 2, "d1"), ("fr", "fr", 1, "d"), ("gr", "gr", 1, "1")])
    for m in model_pool(sig, max_size=4, per_lattice=1, seed=seed, min_size=3):
        assert law_violations(m) == []
        assert adjunction_violations(m) == []
        assert normalization_identity_violations(m) == []


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_validity_is_invariant_under_duality(seed):
    rng = np.random.default_rng(seed)
    sig = random_signature(rng)
    ineq = random_inductive(sig, rng).ineq
    dual = dual_inequality(ineq)
    for m in model_pool(sig, max_size=3, per_lattice=1, seed=seed):
        dm = dual_model(m)
        assert dm.sig.base() == dual_signature(sig).base()
        assert check_validity(ineq, m).valid == check_validity(dual, dm).valid


# -- model files --------------------------------------------------------------------------


def test_model_file(frege_sig):
    m = parse_model((DATA / "bool2.mod").read_text(), frege_sig, "bool2")
    assert m.size == 2 and [int(m.ops["->"][k]) for k in BOOL_IMP] == list(BOOL_IMP.values())
    again = parse_model(format_model(m), frege_sig)
    assert np.array_equal(again.leq, m.leq) and np.array_equal(again.ops["->"], m.ops["->"])


def test_model_file_errors(frege_sig):
    with pytest.raises(ModelError):
        parse_model("leq 0 1\n", frege_sig)
    with pytest.raises(ModelError):
        parse_model("size 2\nfoo 1\n", frege_sig)
    with pytest.raises(LawViolation):
        parse_model("size 2\nleq 0 1\n" + "".join(f"op -> {a} {b} = 0\n" for a in (0, 1) for b in (0, 1)), frege_sig)


# -- lemma checks -------------------------------------------------------------------------


def test_distribution_on_a_diamond():
    m = validate_model(4, SQUARE, {"dia": [0, 3, 3, 3]}, DIA)
    phi = parse_term("dia(p)", DIA)
    assert distribution_violations(phi, (0,), "+", "+", m) == 0
    # read with a "-" leaf, the law would send meets to joins, which fails here
    assert distribution_violations(phi, (0,), "+", "-", m) > 0
    box = validate_signature([("box", "gn", 1, "1")])
    mb = validate_model(4, SQUARE, {"box": [0, 0, 0, 3]}, box)
    assert distribution_violations(parse_term("box(p)", box), (0,), "-", "-", mb) == 0


def test_ackermann_instance(frege_sig, bool2):
    sig = expand_signature(frege_sig)
    alpha = parse_term("#j", sig)
    pairs = [parse_inequality("#i <= #j -> p", sig)]
    assert ackermann_instance_holds(alpha, pairs, "p", "right", bool2)
    # the wrong polarity breaks the biconditional somewhere
    bad = [parse_inequality("#i <= #k -> p", sig)]
    assert not ackermann_instance_holds(alpha, bad, "p", "right", bool2)
