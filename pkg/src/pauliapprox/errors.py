"""Exception types raised by the public API."""


class PauliApproxError(ValueError):
    """Base class for invalid-input errors."""


class InvalidParameterError(PauliApproxError):
    """An (a, k, phi) field lies outside its admissible range."""


class NonPhysicalStateError(PauliApproxError):
    """A Bloch vector lies outside the unit ball."""


class NonUnitTraceError(PauliApproxError):
    pass


class LengthMismatchError(PauliApproxError):
    pass


class RegionError(PauliApproxError):
    """The requested closed form does not apply to the given state."""


class DegenerateParameterError(PauliApproxError):
    pass


class SacchiWindowError(PauliApproxError):
    """The point lies outside the reference case-(i) window."""


class OutOfPolytopeError(PauliApproxError):
    pass


class SetTooLargeError(PauliApproxError):
    pass


class NonConvergenceError(RuntimeError):
    """Iterative solver hit ``max_iter`` before the gap dropped below ``tol``."""

    def __init__(self, gap, iterations):
        super().__init__(f"no convergence after {iterations} iterations (gap={gap:.3e})")
        self.gap = gap
        self.iterations = iterations
