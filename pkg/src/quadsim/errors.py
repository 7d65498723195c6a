"""Exception types shared across the simulator."""


class ConfigurationError(ValueError):
    """A parameter or config file value violates its allowed range."""


class DomainError(ValueError):
    """An operation was called with arguments outside its domain."""
