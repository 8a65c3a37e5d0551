"""Exception hierarchy shared by the library and the command-line front end."""


class QunitError(Exception):
    """Base class for all library errors."""


class InvalidArgumentError(QunitError, ValueError):
    """An argument violates an operation's precondition."""


class DegenerateStateError(QunitError, ValueError):
    """A state vector has (numerically) zero norm."""


class ResourceLimitError(QunitError):
    """A requested size exceeds a configured cap."""


class NumericalFailureError(QunitError, ArithmeticError):
    """An iterative routine failed to converge."""
