"""Exception hierarchy shared by the engine and the CLI."""


class CoxcessError(Exception):
    """Base class for engine errors."""


class CoxeterTypeError(CoxcessError, ValueError):
    """A type outside the classification or above the engine rank limit."""


class BudgetExceeded(CoxcessError):
    """An enumeration would exceed the configured element budget."""


class ConsistencyError(CoxcessError):
    """An internal invariant failed; indicates an engine bug."""


class CacheError(CoxcessError):
    """Base class for cache-file problems."""


class CacheVersionError(CacheError):
    pass


class CacheChecksumError(CacheError):
    pass


class CacheTypeMismatch(CacheError):
    pass


class CacheFormatError(CacheError):
    pass


class WordError(CoxcessError, ValueError):
    """A generator word that does not parse for the given rank."""
