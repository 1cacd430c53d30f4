"""Finite lattice expansions: construction, expansion, evaluation and oracles."""

from alba.models.enumerate import enumerate_lattices, model_pool, random_model, random_table
from alba.models.expand import (
    adjunction_violations,
    complete_preservation_violations,
    dual_model,
    interpret_expanded,
    normalization_identity_violations,
    sigma_pi_violations,
)
from alba.models.io import format_model, load_model, parse_model
from alba.models.lattice import FiniteLE, Lattice, law_violations, validate_model
from alba.models.lemmas import ackermann_instance_holds, distribution_violations, families
from alba.models.semantics import (
    OracleVerdict,
    Validity,
    check_validity,
    equivalence_oracle,
    eval_term,
    evaluate,
)

__all__ = [name for name in dir() if not name.startswith("_")]
