"""Exception types raised across the package."""


class InvalidArgument(ValueError):
    pass


class InvalidDatum(ValueError):
    """A sampled initial datum produced non-finite values."""


class FormatError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ConfigError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CFLViolation(RuntimeError):
    def __init__(self, courant, cfl_max):
        self.courant = courant
        self.cfl_max = cfl_max
        super().__init__(f"Courant number {courant:.6g} exceeds cfl_max={cfl_max:.6g}")


class NoCrossing(ValueError):
    """A characteristic entering the damping zone dies before reaching its far end."""


class SparseRecord(ValueError):
    pass


class MismatchedGrids(ValueError):
    pass


class FluxConditionError(ValueError):
    """The flux does not satisfy the structural hypothesis an operation needs."""


class TimeMismatch(RuntimeError):
    pass
