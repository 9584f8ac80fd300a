"""Exception types shared across the package."""


class SDSError(ValueError):
    """Base class for all errors raised by sdsfam."""


class ModulusError(SDSError):
    pass


class DuplicateElementError(SDSError):
    pass


class ModulusMismatchError(SDSError):
    pass


class ShapeMismatchError(SDSError):
    pass


class NotAnSDSError(SDSError):
    pass


class InfeasibleParametersError(SDSError):
    pass


class TransformError(SDSError):
    """Invalid multiplier, illegal dagger, or block index out of range."""


class UnequalBlockSizesError(SDSError):
    pass


class LengthMismatchError(SDSError):
    pass


class ParseError(SDSError):
    def __init__(self, message, column=None, line=None):
        self.column = column
        self.line = line
        if column is not None:
            message = f"{message} (column {column})"
        super().__init__(message)
