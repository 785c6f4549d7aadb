"""Exception types raised across the package."""


class RuncubeError(Exception):
    pass


class ArithmeticOverflowError(RuncubeError, OverflowError):
    """A checked 64-bit integer operation left the signed range."""

    def __init__(self, operation: str):
        super().__init__(f"int64 overflow in {operation}")
        self.operation = operation


class InvalidDenominatorError(RuncubeError, ValueError):
    pass


class CapacityError(RuncubeError, ValueError):
    pass


class InvalidInputError(RuncubeError, ValueError):
    pass


class DomainError(RuncubeError, ValueError):
    pass


class DecompositionError(RuncubeError):
    """Raised when a part size or cross-edge count disagrees with the prediction."""

    def __init__(self, message: str, parts=None):
        super().__init__(message)
        self.parts = parts
