"""Signatures, terms, concrete syntax and structural operations."""

from alba.syntax.parser import (
    format_inequality,
    format_quasi,
    format_term,
    parse_inequality,
    parse_term,
    tokenize,
)
from alba.syntax.signature import (
    Connective,
    Family,
    Origin,
    Pol,
    Signature,
    dual_signature,
    expand_signature,
    format_signature,
    parse_signature,
    validate_signature,
)
from alba.syntax.terms import (
    BOT,
    TOP,
    App,
    Bot,
    CoNom,
    Inequality,
    Join,
    Meet,
    Nom,
    Polarity,
    QuasiInequality,
    Term,
    Top,
    Var,
    alpha_equivalent,
    atoms,
    dual_inequality,
    dual_term,
    flip,
    is_pure,
    polarity,
    positions,
    replace_at,
    substitute,
    subterm,
    syntactically_closed,
    syntactically_open,
    variables,
)

__all__ = [name for name in dir() if not name.startswith("_")]
