"""Exception hierarchy for auxnet.

Library code raises these; only the CLI turns them into exit codes.
"""
from __future__ import annotations


class AuxNetError(Exception):
    """Base class for every error raised by auxnet."""


class ConfigError(AuxNetError):
    """Invalid scenario configuration or network document."""


class NumericalError(AuxNetError):
    """A numerical operation could not produce a trustworthy result."""


class NonFiniteInput(NumericalError):
    """NaN or Inf reached a public numerical operation."""


class DimensionMismatch(NumericalError):
    """Operand shapes are incompatible."""


class SingularMatrix(NumericalError):
    """A pivot underflowed or the condition estimate exceeded its cap."""


class ConvergenceFailure(NumericalError):
    """An iterative routine hit its iteration cap."""


class SpectraOverlap(NumericalError):
    """Sylvester operands share an eigenvalue within tolerance."""


class DegenerateLeadingCoefficient(NumericalError):
    """The leading polynomial coefficient vanishes."""


class StepTooLarge(NumericalError):
    """dt * ||H|| exceeds the integrator stability bound."""


class DegenerateBond(NumericalError):
    """theta + iG is too small to synthesize the Lee coupling."""


class ResonantEnergy(NumericalError):
    """The energy sits on an eigenvalue of the auxiliary cluster."""


class SingularAuxiliary(NumericalError):
    """H_A cannot be inverted for the large-potential limit."""


class NoSynthesisNeeded(NumericalError):
    """The target hopping already equals the existing one."""


class NonDissipativeAuxiliary(NumericalError):
    """An eigenvalue of H_A has a nonnegative imaginary part."""


class SingularScatteringSystem(NumericalError):
    """The plane-wave matching system has no unique solution."""


class DomainError(NumericalError):
    """Parameters fall outside the domain where a closed form is real."""


class ZeroVector(NumericalError):
    """A vector expected to be nonzero is identically zero."""


class NoBracket(NumericalError):
    """The scan interval does not bracket the transition."""
