class MetaFibError(Exception):
    pass


class SpecParseError(MetaFibError, ValueError):
    def __init__(self, message, token=None):
        super().__init__(message)
        self.token = token


class ArityError(SpecParseError):
    pass


class SpecValidationError(MetaFibError, ValueError):
    pass


class CompositionRangeError(MetaFibError, IndexError):
    """An intermediate A^j(n) fell outside the computed range."""

    def __init__(self, message, depth):
        super().__init__(message)
        self.depth = depth


class TableStateError(MetaFibError, RuntimeError):
    pass


class CacheFormatError(MetaFibError, ValueError):
    pass
