"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes (config -> 2, data -> 3, numerical -> 4).
"""


class SpkmError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(SpkmError):
    """Invalid parameter or specification (bad kernel family, R < 1, ...)."""


class DataError(SpkmError):
    """Problem with user data: missing file, parse failure, shape mismatch."""


class NumericalError(SpkmError):
    """Numerical failure: non-finite solve, impossible optimization state."""


class DegeneratePrediction(NumericalError):
    """Prediction vector collapsed to ~0, making the cosine loss undefined.

    The trainer treats this as a restart-worthy failure rather than a fatal
    error; it only escapes fit() if every restart degenerates.
    """
