"""Exception taxonomy shared by all modules."""


class HarvestError(Exception):
    """Base class for every error raised by this package."""


class InvalidParams(HarvestError):
    """A physical or dimensionless parameter violates its precondition."""


class StabilityViolation(HarvestError):
    """Requested configuration sits in the unstable-spectrum regime."""


class DomainError(HarvestError):
    """Argument outside the supported domain of a special function."""


class UnstableSpectrum(HarvestError):
    """Dispersion radicand went negative at a requested momentum."""


class NoInstability(HarvestError):
    """No critical coupling exists inside the search bracket."""


class QuadratureError(HarvestError):
    """Base class for integration failures."""


class MaxSubdivisions(QuadratureError):
    """Adaptive refinement hit the subdivision cap before converging."""


class NonFiniteIntegrand(QuadratureError):
    """Integrand returned NaN or infinity at a quadrature node."""


class SlowConvergence(QuadratureError):
    """Lobe-series acceleration failed to converge within the lobe budget."""


class CoincidentDetectorsUnregularized(HarvestError):
    """X's imaginary part has no regularizable value at zero separation."""


class ConfigError(HarvestError):
    """Malformed sweep axes or run configuration."""


class EmptyResult(HarvestError):
    """Operation requires at least one successful row."""
