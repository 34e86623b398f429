"""Exception types shared across the package."""


class FcblabError(Exception):
    """Base class for errors raised by fcblab."""


class CapacityError(FcblabError):
    """A desk-scale size guard was exceeded."""


class ConvergenceError(FcblabError):
    """The SDP solver stopped before reaching the requested tolerance."""


class ExtractionError(FcblabError):
    """A matrix witness could not be recovered from an SDP solution."""


class ModelViolationError(FcblabError):
    """An internal consistency check of the query simulator failed."""


class ParseError(FcblabError, ValueError):
    """An input file does not conform to the documented format."""
