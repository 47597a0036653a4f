"""Exception types shared across the solver modules."""


class KramersError(Exception):
    """Base class for all numerical failures raised by this package."""


class NonConvergence(KramersError):
    """A quadrature did not reach the requested tolerance."""


class TailTooLarge(KramersError):
    """The semi-infinite tail correction could not be bounded reliably."""


class RegularityCheckFailed(KramersError):
    """A spectral density came out non-finite where it must be regular."""


class OscillatoryNonConvergence(KramersError):
    """An oscillatory cosine/sine transform failed to settle below tolerance."""


class InvalidAccommodation(ValueError, KramersError):
    """Accommodation coefficient outside the physical range (0, 1]."""


class MaxItersExceeded(KramersError):
    """The transport iteration hit its sweep budget before converging."""


class DivergenceDetected(KramersError):
    """The transport iteration residual grew instead of contracting."""


class FitUnstable(KramersError):
    """The far-field slip fit has a residual slope beyond tolerance."""
