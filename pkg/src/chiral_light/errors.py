"""Exception types raised across the package."""


class ChiralLightError(Exception):
    """Base class for all errors raised by chiral_light."""


class DegenerateDrive(ChiralLightError, ValueError):
    """The drive leaves the cooling coupling g1 at zero, so eta is undefined."""


class IncommensurateMomentum(ChiralLightError, ValueError):
    """phi1 - phi2 does not sit on the lattice momentum grid 2*pi*m/N."""


class Unstable(ChiralLightError):
    """eta >= 1: the squeezed-mode dissipator has no steady state."""


class SelfPaired(ChiralLightError, ValueError):
    """A two-mode routine was called on a momentum that pairs with itself."""


class NonPhysical(ChiralLightError, ValueError):
    """A covariance matrix violates gamma + i/2 Omega >= 0."""


class TruncationLeak(ChiralLightError):
    """Population reached the top Fock level beyond the configured threshold."""


class StepTooLarge(ChiralLightError, ValueError):
    """Integration step cannot resolve the fastest frequency of the model."""


class ParseError(ChiralLightError, ValueError):
    """Malformed configuration text."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class ValidationError(ChiralLightError, ValueError):
    """Configuration parsed but a field holds an invalid value."""

    def __init__(self, message: str, field: str | None = None):
        self.field = field
        if field is not None:
            message = f"{field}: {message}"
        super().__init__(message)
