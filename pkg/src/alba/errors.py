"""Exception hierarchy shared by every module of the workbench."""

from __future__ import annotations


class AlbaError(Exception):
    """Base class for all workbench errors."""


# -- signatures and syntax ---------------------------------------------------


class SignatureError(AlbaError):
    pass


class DuplicateName(SignatureError):
    pass


class RegularArityViolation(SignatureError):
    pass


class OrderTypeLengthMismatch(SignatureError):
    pass


class TermSyntaxError(AlbaError):
    """Raised by the parser; carries the offending character offset."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        where = f" at offset {position}" if position is not None else ""
        super().__init__(f"{message}{where}")


class UnknownConnective(TermSyntaxError):
    pass


class ArityMismatch(TermSyntaxError):
    pass


# -- trees and classification ------------------------------------------------


class NotALeaf(AlbaError):
    pass


class UncoveredVariable(AlbaError):
    pass


class TooManyVariables(AlbaError):
    pass


class NotInductive(AlbaError):
    pass


# -- engine rules ------------------------------------------------------------


class RuleError(AlbaError):
    """A rule was applied where its premises do not hold."""


class NotSACBranch(RuleError):
    pass


class NotPivotal(RuleError):
    pass


class GammaNotAdmissible(RuleError):
    pass


class HeadNotResiduable(RuleError):
    pass


class NotAckermannReady(RuleError):
    pass


class NotSplittable(RuleError):
    pass


# -- finite models -----------------------------------------------------------


class ModelError(AlbaError):
    pass


class NotALattice(ModelError):
    def __init__(self, message: str, witness=None):
        self.witness = witness
        super().__init__(message)


class LawViolation(ModelError):
    def __init__(self, message: str, witness=None):
        self.witness = witness
        super().__init__(message)


class AdjointMissing(ModelError):
    pass


class UnboundAtom(ModelError):
    pass
