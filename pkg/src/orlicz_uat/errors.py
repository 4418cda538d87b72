"""Exception types shared across the library."""


class OrliczError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(OrliczError, ValueError):
    """Malformed, inconsistent, or out-of-domain input."""


class UnboundedConjugateError(OrliczError):
    """The convex conjugate diverges (or overflows) within the search budget."""


class AbsoluteContinuityError(OrliczError):
    """A measure charges a point that its dominating measure does not."""


class DegenerateProbeError(OrliczError):
    """A growth-condition probe found phi(x) = 0 at a strictly positive x."""


class BracketingError(OrliczError):
    """Geometric bracketing exhausted its doubling/halving budget."""


class FitSolverError(OrliczError):
    """The least-squares normal equations could not be solved."""


class HypothesisViolation(OrliczError):
    """A mathematical hypothesis required by an experiment does not hold.

    The offending hypothesis is named so a caller can report exactly which
    assumption failed rather than a generic error.
    """

    def __init__(self, hypothesis: str, detail: str = ""):
        self.hypothesis = hypothesis
        self.detail = detail
        msg = f"hypothesis violated: {hypothesis}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)
