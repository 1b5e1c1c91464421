"""Exception hierarchy shared by all modules."""


class ShadowPriceError(Exception):
    """Base class for errors raised by this package."""


class DomainError(ShadowPriceError, ValueError):
    """An input lies outside the domain where a formula is defined."""


class UnsupportedRegime(ShadowPriceError):
    """The requested operation has no meaning for this Merton-proportion regime."""


class ConvergenceError(ShadowPriceError, RuntimeError):
    """A root search failed to bracket or converge."""


class QuadratureError(ShadowPriceError, RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance."""


class SimulationError(ShadowPriceError, RuntimeError):
    """A simulated wealth process left the admissible region."""
