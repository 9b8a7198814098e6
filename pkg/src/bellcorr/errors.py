"""Exception types raised by bellcorr."""


class BellCorrError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(BellCorrError, ValueError):
    """An angle lies outside the interval an operation accepts."""


class InputError(BellCorrError, ValueError):
    """User-supplied data (tables, weights, axes, parameters) is invalid."""


class ConfigurationError(BellCorrError, ValueError):
    """A model profile, optimizer budget or experiment config is unusable."""


class ModelIntegrityError(BellCorrError):
    """A model produced a value violating |C| <= 1 or finiteness."""


class InconclusiveError(BellCorrError):
    """The domination search could not resolve a witness at the requested margin."""
