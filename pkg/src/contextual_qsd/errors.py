"""Exception types raised by the library."""


class DomainError(ValueError):
    """A numeric argument lies outside the domain of an operation.

    ``param`` names the offending argument so front ends can report it.
    """

    def __init__(self, param, message):
        super().__init__(message)
        self.param = param


class UnsupportedConfigurationError(ValueError):
    """The request is well-formed but outside what the model covers
    (for example unequal priors for the noisy-state bounds)."""


def check_unit_interval(name, value, *, open_left=False, open_right=False):
    """Raise :class:`DomainError` unless ``value`` lies in [0, 1]
    (or the requested half-open/open variant)."""
    value = float(value)
    lo_ok = value > 0.0 if open_left else value >= 0.0
    hi_ok = value < 1.0 if open_right else value <= 1.0
    if not (lo_ok and hi_ok):
        left = "(" if open_left else "["
        right = ")" if open_right else "]"
        raise DomainError(name, f"{name} must lie in {left}0,1{right}")
    return value
