"""Exception hierarchy shared by the library and the command-line front end."""


class UscRamanError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(UscRamanError, ValueError):
    """Invalid parameter value or configuration document."""

    def __init__(self, message, field=None):
        self.field = field
        if field is not None:
            message = f"{field}: {message}"
        super().__init__(message)


class InvalidDimensionError(UscRamanError, ValueError):
    pass


class WindowError(UscRamanError, ValueError):
    """Integration window does not fit inside the sampled grid."""


class NumericalError(UscRamanError, RuntimeError):
    """A numerical routine failed or produced an inconsistent result."""


class DegenerateSteadyStateError(NumericalError):
    pass


class IntegrationError(NumericalError):
    pass


class GridPointError(NumericalError):
    """Failure of a single point inside a sweep; carries the point index."""

    def __init__(self, index, point, cause):
        self.index = index
        self.point = point
        self.cause = cause
        super().__init__(f"grid point {index} {point}: {cause}")

    def __reduce__(self):
        return (type(self), (self.index, self.point, self.cause))
