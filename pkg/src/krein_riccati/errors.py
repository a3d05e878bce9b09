"""Exception hierarchy shared by all modules."""


class KreinRiccatiError(Exception):
    """Base class for library errors."""


class NonSquareError(KreinRiccatiError, ValueError):
    pass


class DimensionCapError(KreinRiccatiError, ValueError):
    pass


class DimensionMismatchError(KreinRiccatiError, ValueError):
    pass


class ConvergenceFailure(KreinRiccatiError, RuntimeError):
    pass


class SingularError(KreinRiccatiError, ValueError):
    """Raised by :func:`krein_riccati.dense.solve` when a pivot is too small."""

    def __init__(self, msg, smallest_singular_value=None, cond=None):
        super().__init__(msg)
        self.smallest_singular_value = smallest_singular_value
        self.cond = cond


class EigenvalueOnContourError(KreinRiccatiError, ValueError):
    pass


class QuadratureDivergence(KreinRiccatiError, RuntimeError):
    pass


class SymmetryViolation(KreinRiccatiError, ValueError):
    """Spectrum is not symmetric with respect to the imaginary axis."""

    def __init__(self, msg, violations=()):
        super().__init__(msg)
        self.violations = list(violations)


class DegenerateError(KreinRiccatiError, ValueError):
    pass


class NotHermitianError(KreinRiccatiError, ValueError):
    def __init__(self, msg, which=None, asymmetry=None):
        super().__init__(msg)
        self.which = which
        self.asymmetry = asymmetry


class SizeMismatchError(KreinRiccatiError, ValueError):
    pass


class GammaUnsetError(KreinRiccatiError, ValueError):
    pass


class RaySpectrumCollision(KreinRiccatiError, ValueError):
    pass


class ZeroDenominatorError(KreinRiccatiError, ZeroDivisionError):
    pass


class NotFoundError(KreinRiccatiError, LookupError):
    """No invariant neutral half could be found; ``signature`` is the evidence."""

    def __init__(self, msg, signature=None):
        super().__init__(msg)
        self.signature = signature


class ImaginaryObstruction(KreinRiccatiError, ValueError):
    pass


class AxisEigenvalueError(KreinRiccatiError, ValueError):
    pass


class StripViolationError(KreinRiccatiError, ValueError):
    pass


class NotAGraphError(KreinRiccatiError, ValueError):
    def __init__(self, msg, smallest_singular_value=None):
        super().__init__(msg)
        self.smallest_singular_value = smallest_singular_value


class SingularGapError(KreinRiccatiError, ValueError):
    pass


class NotUniformError(KreinRiccatiError, ValueError):
    pass


class DefectiveError(KreinRiccatiError, ValueError):
    pass


class NotRealError(KreinRiccatiError, ValueError):
    pass


class NotPositiveError(KreinRiccatiError, ValueError):
    pass
