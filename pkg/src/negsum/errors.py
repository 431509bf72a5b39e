"""Exception types, one per CLI exit code class."""


class ConfigError(ValueError):
    """Invalid configuration, unknown schema/unit/method ids, bad parameters (exit 1)."""


class DataError(ValueError):
    """Missing, empty, or malformed input data (exit 2)."""


class BackendError(RuntimeError):
    """A generation or classifier backend failed or lacks a capability (exit 3)."""
