"""Exception types shared across the package."""


class LztrajError(Exception):
    """Base class for all package errors."""


class ConfigError(LztrajError):
    """Invalid configuration: bad value, unknown key, inconsistent block."""


class TrajectoryError(LztrajError):
    """A trajectory violated a runtime guard (step control, overflow, NaN)."""


class OracleError(LztrajError):
    """Reference integration violated a physical invariant."""


class ValidationError(LztrajError):
    """Ensemble failed the agreement bound against the reference integration."""
