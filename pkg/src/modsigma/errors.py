"""Exception types raised by modsigma."""


class ModSigmaError(Exception):
    """Base class for all library errors."""


class DegenerateBasis(ModSigmaError, ValueError):
    """The two half-periods do not span the plane."""


class NotUnimodular(ModSigmaError, ValueError):
    """An integer basis change with |det| != 1."""


class ConvergenceFailure(ModSigmaError, ArithmeticError):
    """A series did not converge within its term cap."""


class PoleAt(ModSigmaError, ArithmeticError):
    """Evaluation requested at (or numerically on top of) a lattice pole."""

    def __init__(self, z, pole):
        self.z = z
        self.pole = pole
        super().__init__(f"pole at lattice point {pole!r} (requested z={z!r})")


class NotCommensurate(ModSigmaError, ValueError):
    """p*z is not a lattice point."""


class IncompleteCensus(ModSigmaError, ArithmeticError):
    """Zero search missed zeros: the winding sum over a cell is nonzero."""

    def __init__(self, message, zeros=None):
        self.zeros = zeros or []
        super().__init__(message)


class OnContour(ModSigmaError, ArithmeticError):
    """A zero lies on the winding contour."""


class CountMismatch(ModSigmaError, ValueError):
    """Number of prescribed zeros differs from the flux count."""


class ParticleCountMismatch(ModSigmaError, ValueError):
    """Many-body configuration size differs from the flux count."""


class ConstraintViolation(ModSigmaError, ValueError):
    """Zeros and boundary momentum K do not satisfy sum(w) = K A / pi."""


class NearZeroDivision(ModSigmaError, ArithmeticError):
    """Reference value too small for a meaningful ratio."""


class SingularBasis(ModSigmaError, ArithmeticError):
    """Single-particle family is not linearly independent."""
