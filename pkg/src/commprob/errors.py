"""Exception types shared across the package."""

from __future__ import annotations


class CommProbError(Exception):
    """Base class for all package-specific errors."""


class NotAGroup(CommProbError):
    """A multiplication table violates a group axiom.

    ``witness`` carries the offending data (e.g. an associativity triple or
    an element without an inverse) when one is available.
    """

    def __init__(self, reason: str, witness=None):
        msg = reason if witness is None else f"{reason} (witness: {witness})"
        super().__init__(msg)
        self.reason = reason
        self.witness = witness


class ClosureExceedsCap(CommProbError):
    """Permutation closure grew past the configured cap."""

    def __init__(self, cap: int, reached: int):
        super().__init__(f"generated group exceeds cap {cap} (reached {reached})")
        self.cap = cap
        self.reached = reached


class NotNormal(CommProbError):
    """Quotient requested by a non-normal subgroup; witness is (g, x, gxg^-1)."""

    def __init__(self, witness):
        g, x, c = witness
        super().__init__(f"subgroup is not normal: conjugating {x} by {g} gives {c}")
        self.witness = witness


class InvalidParameters(CommProbError):
    """Catalog spec parameters violate a family constraint."""


class BudgetExceeded(CommProbError):
    """Estimated cost of a brute-force operation exceeds the budget."""

    def __init__(self, estimate: int, budget: int, what: str = "operation"):
        super().__init__(
            f"{what}: estimated cost {estimate} exceeds budget {budget}"
        )
        self.estimate = estimate
        self.budget = budget


class DomainError(CommProbError):
    """Arguments outside the mathematical domain of a formula."""


class AbelianInput(CommProbError):
    """A bound or rigidity check only defined for non-abelian groups."""


class HypothesisNotMet(CommProbError):
    """A structural hypothesis required by a validator does not hold."""


class NotClass2ExponentP(CommProbError):
    """Group is not class <= 2 of exponent p (nor has derived subgroup of order p)."""

    def __init__(self, predicate: str):
        super().__init__(f"violated predicate: {predicate}")
        self.predicate = predicate


class CheckFailed(AssertionError, CommProbError):
    """A theorem validator found a violated equivalence; carries the report."""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report
