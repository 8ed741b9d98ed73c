"""Exception hierarchy shared across the package.

Configuration problems (bad shapes, invalid values, unusable input kinds) and
numerical failures (divergence, event explosion, degenerate systems) are kept
on separate branches so the CLI can map them to distinct exit codes.
"""


class HeavinetError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(HeavinetError, ValueError):
    """Invalid configuration, file content, or argument combination."""


class UnsupportedInputError(ConfigError):
    """External input kind not usable by the requested algorithm."""


class NumericalError(HeavinetError, RuntimeError):
    """Numerical failure during simulation or inversion."""


class DivergenceError(NumericalError):
    """Non-finite state encountered while integrating."""


class EventExplosionError(NumericalError):
    """Event-driven simulation exceeded the event budget."""


class AssemblyError(NumericalError):
    """Linear system cannot be assembled from the given schedule."""


class EmptySystemError(AssemblyError):
    """Neuron has no usable firing onsets, so no rows can be built."""


class InsufficientDataError(NumericalError):
    """Not enough data points for the requested fit or estimate."""
