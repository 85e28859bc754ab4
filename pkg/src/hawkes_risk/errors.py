"""Exception types shared across the package."""


class HawkesError(Exception):
    """Base class for all errors raised by hawkes_risk."""


class DomainError(HawkesError):
    """A transform or solver was evaluated outside its domain."""


class HeavyTailError(HawkesError):
    """Exponential moments were requested from a heavy-tailed claim law."""


class StabilityError(HawkesError):
    """The branching ratio is >= 1; the process has no stable regime."""


class SteepnessError(HawkesError):
    """No tangency point exists inside the mark transform domain."""


class NoConvergence(HawkesError):
    """An iterative solver exhausted its iteration budget."""


class WindowError(HawkesError):
    """The premium rate lies outside the net-profit window."""


class NetProfitError(HawkesError):
    """The net-profit condition fails; ruin is certain."""


class ExplosionGuard(HawkesError):
    """A simulation exceeded its event-count cap."""


class DivergenceError(HawkesError):
    """Volterra iterates exceeded the critical fixed-point value."""


class ConfigError(HawkesError):
    """A run configuration failed to parse or validate."""


class ConditionWarning(UserWarning):
    """A regularity condition required by a limit theorem fails."""
