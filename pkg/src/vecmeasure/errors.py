"""Exception types raised by the library."""


class VecMeasureError(Exception):
    pass


class OutOfRange(VecMeasureError, ValueError):
    """A mass argument lies outside ``[0, mu_1(X)]``."""


class NotInRange(VecMeasureError, ValueError):
    """A target vector is not in the range of the measure."""


class NonEquivalent(VecMeasureError, ValueError):
    """The density ratio is undefined or unbounded; call ``ensure_equivalent`` first."""


class Infeasible(VecMeasureError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class InvalidKernel(VecMeasureError, ValueError):
    pass


class CertificationFailed(VecMeasureError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class TooLarge(VecMeasureError, ValueError):
    """Brute-force enumeration requested beyond its size cap."""
