"""Exception hierarchy shared by the library and the CLI."""


class TannakaError(Exception):
    """Base class for all errors raised by this package."""


class SpecError(TannakaError):
    """A groupoid descriptor is malformed or expands to an invalid groupoid."""


class ShapeError(TannakaError, ValueError):
    """Matrix or block shapes disagree with the representation data."""


class SplitError(TannakaError):
    """Randomized commutant splitting failed to converge."""


class DecompositionError(TannakaError):
    """A representation could not be decomposed over the supplied dual."""


class ConfigError(TannakaError):
    """Invalid solver or command-line configuration."""


class ScaleError(TannakaError):
    """Input exceeds the supported desk-scale limits."""
