"""Exception types shared across the package.

Everything derives from PersetsError so the CLI can catch one class and
turn it into exit code 1.
"""
from __future__ import annotations


class PersetsError(Exception):
    pass


class NotSquare(PersetsError):
    """Input array is not a square 2-D matrix."""


class NonFinite(PersetsError):
    """Input contains NaN or infinite entries."""


class AxiomViolation(PersetsError):
    """Pseudo-metric axioms are violated.

    ``violations`` is a list of ``(kind, indices, amount)`` tuples where
    kind is one of "negative", "diagonal", "asymmetry", "triangle".
    """

    def __init__(self, violations):
        self.violations = list(violations)
        head = ", ".join(f"{k} at {idx}" for k, idx, _ in self.violations[:4])
        more = "" if len(self.violations) <= 4 else f" (+{len(self.violations) - 4} more)"
        super().__init__(f"{len(self.violations)} axiom violation(s): {head}{more}")


class IndexOutOfRange(PersetsError):
    pass


class TooFewPoints(PersetsError):
    pass


class SizeMismatch(PersetsError):
    pass


class TooLarge(PersetsError):
    pass


class NonMonotoneFiltration(PersetsError):
    pass


class PointNotOnModel(PersetsError):
    pass


class InvalidPoint(PersetsError):
    pass


class InvalidDescriptor(PersetsError):
    pass


class UnsupportedCombination(PersetsError):
    pass


class EmptySample(PersetsError):
    pass


class RegionMismatch(PersetsError):
    pass


class InfiniteDeath(PersetsError):
    pass


class EmptyInput(PersetsError):
    pass


class NotPrincipal41(PersetsError):
    pass
