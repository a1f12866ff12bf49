class SpectraCountError(Exception):
    """Base class for every error raised by spectra_count."""


class ContractViolation(SpectraCountError, ValueError):
    """Arguments do not satisfy the documented preconditions."""


class UsageError(ContractViolation):
    """Command line arguments could not be parsed."""


class MatrixMarketError(SpectraCountError, ValueError):
    def __init__(self, message, path=None, line=None):
        if line is not None:
            message = f"{path}:{line}: {message}"
        elif path is not None:
            message = f"{path}: {message}"
        super().__init__(message)
        self.path = path
        self.line = line


class EigenSolverError(SpectraCountError):
    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class QuadratureBreakdown(SpectraCountError):
    def __init__(self, message, condition=None, sample=None, matvecs=None):
        super().__init__(message)
        self.condition = condition
        self.sample = sample
        self.matvecs = matvecs


class KrylovError(SpectraCountError):
    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class OracleRefusal(SpectraCountError):
    def __init__(self, message, n=None, cap=None):
        super().__init__(message)
        self.n = n
        self.cap = cap
