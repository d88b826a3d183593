"""Exception taxonomy shared across the package."""


class BlowupError(Exception):
    """Base class for all package-specific errors."""


class DomainError(BlowupError):
    """An argument lies outside the mathematical domain of an operation."""


class SingularityError(DomainError):
    """Evaluation was requested at (or straddling) a genuine singularity."""


class DimensionError(BlowupError):
    """Vector/matrix dimensions are incompatible."""


class InputError(BlowupError):
    """Malformed external input (files, CLI values)."""


class ReframeNeeded(BlowupError):
    """The peak component is not the pivot one; this chart cannot continue."""


class StepFailure(BlowupError):
    """The validated integrator could not complete a step above the minimum size."""


class BudgetExhausted(BlowupError):
    """An iteration budget ran out before the stop condition fired."""

    def __init__(self, message, steps=None):
        super().__init__(message)
        self.steps = steps if steps is not None else []


class ValidationFailure(BlowupError):
    """A rigorous validation (Lyapunov domain, containment check) failed."""


class InsufficientData(BlowupError):
    """Not enough usable samples for a diagnostic fit."""
