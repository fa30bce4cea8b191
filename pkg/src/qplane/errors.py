"""Exception hierarchy for qplane."""


class QPlaneError(Exception):
    """Base class for all errors raised by qplane."""


class SpectrumError(QPlaneError, ValueError):
    """Invalid spectral data, or an operation undefined for the given spectrum."""


class AmbientMismatchError(QPlaneError, ValueError):
    """Two algebra elements live over different spectral sets."""


class MembershipError(QPlaneError, ValueError):
    """An element is outside the algebra an operation requires.

    Raised for instance by ``evinf`` when a coefficient has no declared limit
    at infinity, or by ``indicator`` when the indicator would be
    discontinuous on the spectrum.
    """


class ConvergenceError(QPlaneError, ArithmeticError):
    """Adaptive truncation did not stabilise before the maximum window."""

    def __init__(self, msg, last_values=None, window=None):
        super().__init__(msg)
        self.last_values = last_values
        self.window = window


class NonIntegralError(QPlaneError, ArithmeticError):
    """A pairing that should be an integer is not, within tolerance."""


class LatticeError(QPlaneError, ValueError):
    """A pairing vector does not correspond to a point of the generator lattice."""


class StoreError(QPlaneError, OSError):
    """The run store could not be read or written."""


class ConfigError(QPlaneError, ValueError):
    """A configuration file or command-line specification is malformed."""
