"""Exception types raised across the package."""


class SpdGeoError(Exception):
    """Base class for all package-specific errors."""


class NonConvergence(SpdGeoError):
    """The underlying iterative eigenvalue/SVD solver failed to converge."""


class DomainViolation(SpdGeoError):
    """A matrix function was applied to a spectrum outside its domain."""


class NotPSD(SpdGeoError):
    """An operation requiring positive semidefiniteness received an
    indefinite matrix, or a path left the positive semidefinite cone."""


class SingularInput(SpdGeoError):
    """A numerically singular matrix was passed to an operation that
    requires strict positive definiteness (Riemannian metric)."""


class LengthMismatch(SpdGeoError, ValueError):
    """Vectors of unequal length were compared."""


class NegativeEntry(SpdGeoError, ValueError):
    """A log-domination comparison received a negative entry."""


class InvalidOrder(SpdGeoError, ValueError):
    """Compound-matrix order k outside 1..dim."""


class HypothesisViolated(SpdGeoError):
    """A checked lemma's hypothesis does not hold for the given inputs."""


class ParseError(SpdGeoError):
    """A tensor-field file could not be parsed."""


class ValidationError(SpdGeoError):
    """A tensor-field file parsed but violated the schema or invariants."""
