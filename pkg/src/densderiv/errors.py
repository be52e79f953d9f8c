"""Exception and warning types raised by the library and the CLI."""


class DensDerivError(Exception):
    """Base class for all library errors."""


class OrderTooHighError(DensDerivError, ValueError):
    """A kernel derivative of an order the kernel does not support was requested."""

    def __init__(self, kernel, order, max_order):
        self.kernel = kernel
        self.order = order
        self.max_order = max_order
        super().__init__(
            f"kernel {kernel!s} supports derivatives up to order {max_order}, "
            f"got {order}"
        )


class NonpositiveBandwidthError(DensDerivError, ValueError):
    pass


class DataError(DensDerivError, ValueError):
    """Problems with the observed data (parsing, size, degeneracy)."""


class ParseError(DataError):
    def __init__(self, line, text):
        self.line = line
        super().__init__(f"line {line}: cannot parse {text!r} as a number")


class NonFiniteValueError(DataError):
    def __init__(self, line, text):
        self.line = line
        super().__init__(f"line {line}: non-finite value {text!r}")


class EmptyInputError(DataError):
    pass


class DegenerateSampleError(DataError):
    pass


class BoundaryMinimumWarning(UserWarning):
    """The optimizer converged onto an edge of the search interval."""
