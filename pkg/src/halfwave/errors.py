"""Exception types raised by the package."""


class HWMError(Exception):
    """Base class for all errors raised by halfwave."""


class NotNull(HWMError):
    """A vector expected to square to zero does not."""


class ZeroVector(HWMError):
    """A vector expected to be non-zero is zero."""


class NotOrthogonal(HWMError):
    """A vector expected to be orthogonal (bilinear dot) to a null vector is not."""


class Singular(HWMError):
    """A kernel was evaluated at (or too close to) one of its poles."""


class PoleCollision(HWMError):
    """Two poles coincide within the singularity tolerance."""


class NonRealEnergy(HWMError):
    """Energy density of real-reduced data has a non-negligible imaginary part."""


class NotAdmissible(HWMError):
    """Initial data violates the norm constraints."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class DegenerateSpin(HWMError):
    """A spin has vanishing norm, so the pole velocity is undefined."""


class NoConvergence(HWMError):
    """The constraint iteration did not converge."""

    def __init__(self, message, last_change=None, iterations=None):
        super().__init__(message)
        self.last_change = last_change
        self.iterations = iterations


class SamplingExhausted(HWMError):
    """Rejection sampling of a random scenario ran out of attempts."""


class PoleCrossing(HWMError):
    """A pole reached the real axis during time evolution."""

    def __init__(self, message, time=None, trajectory=None):
        super().__init__(message)
        self.time = time
        self.trajectory = trajectory


class StepFailure(HWMError):
    """The adaptive integrator step size underflowed."""

    def __init__(self, message, time=None, trajectory=None):
        super().__init__(message)
        self.time = time
        self.trajectory = trajectory


class Instability(HWMError):
    """The PDE oracle left the unit sphere by more than the allowed margin."""

    def __init__(self, message, time=None):
        super().__init__(message)
        self.time = time


class GridMismatch(HWMError):
    """Two grid fields live on different grids."""


class ConfigError(HWMError):
    """A scenario configuration file is malformed."""


class SeparationWarning(UserWarning):
    """Poles are closer (in Re a / Im a) than the iteration is known to handle well."""
