"""Exception types shared across the package.

Certification errors (everything a computation refuses to assert) derive
from CertificationError so the CLI can map them to a single exit code.
"""


class ZetaconvError(Exception):
    """Base class for package errors."""


class InvalidInput(ZetaconvError):
    """A parameter violates its documented domain (CLI exit code 3)."""


class CertificationError(ZetaconvError):
    """A result could not be certified at the requested tolerance (exit 2)."""


class TruncationInsufficient(CertificationError):
    """Certified truncation bound exceeds the requested absolute error."""


class LimitTooLarge(CertificationError):
    """A table would exceed the configured memory budget."""


class TailNotCertified(CertificationError):
    """Convolution tail mass bound exceeds the caller's tolerance."""


class SupNotCertified(CertificationError):
    """Retained support does not provably contain the global maximum."""


class QuadratureNotConverged(CertificationError):
    """Adaptive quadrature refinements keep disagreeing beyond tolerance."""


class MarginTooSmall(CertificationError):
    """A strict-inequality check came out too close to equality to assert."""


class DivergentConstant(CertificationError):
    """A series constant cannot be certified convergent at the given radius."""


class GridOutsideNeighborhood(InvalidInput):
    """An evaluation grid leaves the certified neighborhood of t = 0."""
