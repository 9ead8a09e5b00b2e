"""Exception and warning types raised across the package."""


class ZetaPfracError(Exception):
    """Base class for all package errors."""


class PoleError(ZetaPfracError, ZeroDivisionError):
    """Evaluation requested at (or numerically indistinguishable from) a pole."""


class DomainError(ZetaPfracError, ValueError):
    """Argument outside the documented domain of an operation."""


class ConvergenceError(ZetaPfracError, ArithmeticError):
    """An adaptive procedure failed to reach its tolerance."""


class CapError(ConvergenceError):
    """A series hit ``max_series_terms`` before converging."""


class SimpleZeroViolation(ZetaPfracError):
    """|zeta'| at a located zero fell below the simplicity threshold."""


class RealnessViolation(ZetaPfracError):
    """A quantity proven real carried an imaginary part above its error budget."""


class SchemaError(ZetaPfracError, ValueError):
    """Cache file layout or schema version does not match."""


class ChecksumError(ZetaPfracError, ValueError):
    """Cache file content does not match its recorded checksum."""


class DisjointnessError(ZetaPfracError, ValueError):
    """Exclusion disks overlap."""


class CaseError(ZetaPfracError, ValueError):
    """Decomposition check called with a configuration its case does not admit."""


class StepError(ZetaPfracError, ValueError):
    """Finite-difference step too large for the base point."""


class InsufficientData(ZetaPfracError, ValueError):
    """Too few zeros for a regression."""


class WindowError(ZetaPfracError, ValueError):
    """Quadrature window too small for the requested tolerance."""


class ConfigError(ZetaPfracError, ValueError):
    """Invalid run configuration."""


class MissingCacheError(ZetaPfracError, FileNotFoundError):
    """Zero cache required but not present."""


class MissedZeroWarning(UserWarning):
    """Zero count over [0, T] disagrees with the smooth counting estimate."""


class PrecisionWarning(UserWarning):
    """Loaded data was stored at lower precision than requested."""


class AnalyticityWarning(UserWarning):
    """Function failed inside a disk assumed to be a region of analyticity."""
