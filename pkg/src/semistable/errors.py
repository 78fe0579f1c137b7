"""Exception hierarchy for semistable.

ParameterError covers bad user input (CLI exit code 1); the NumericalError
family covers inversion/sampling failures (CLI exit code 2).
"""


class SemistableError(Exception):
    """Base class for all package errors."""


class ParameterError(SemistableError, ValueError):
    """Invalid parameter or configuration value."""


class NumericalError(SemistableError):
    """Base class for numerical failures in inversion or sampling."""


class EvaluationDomainError(NumericalError):
    """Argument outside the evaluation domain, or evaluation overflowed."""


class NegativeCoefficientError(NumericalError):
    """A recovered pmf coefficient is materially negative.

    Either the transform inversion failed numerically, or the parameter
    triple lies outside the admissible region where the generating
    function is an actual PGF (see SemiStableParams.amplitude_bound).
    """

    def __init__(self, index, value, message=None):
        self.index = index
        self.value = value
        super().__init__(
            message
            or f"coefficient p[{index}] = {value:.6g} is below the negativity tolerance"
        )


class TailToleranceError(NumericalError):
    """Requested tail tolerance unreachable within the sample-size cap."""


class TailTooHeavyError(NumericalError):
    """Pmf table carries too much unresolved tail mass for sampling."""


class BranchTrackingError(NumericalError):
    """Continuous logarithm tracking failed along the evaluation circle."""
