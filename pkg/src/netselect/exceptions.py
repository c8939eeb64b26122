"""Exception hierarchy for netselect.

Every error raised on purpose by the library derives from
:class:`NetSelectError`, so callers (the CLI in particular) can separate
input problems from genuine bugs.
"""


class NetSelectError(Exception):
    """Base class for all library errors."""


class MatrixValidationError(NetSelectError, ValueError):
    """A pairwise comparison matrix violates the fuzzy preference constraints."""


class DiagonalViolation(MatrixValidationError):
    pass


class ReciprocityViolation(MatrixValidationError):
    pass


class RangeViolation(MatrixValidationError):
    pass


class DimensionMismatch(NetSelectError, ValueError):
    pass


class WeightDimensionMismatch(DimensionMismatch):
    pass


class ZeroWeight(NetSelectError, ValueError):
    pass


class ConsistencyGateFailure(NetSelectError, ValueError):
    """A comparison matrix has a consistency ratio at or above the 0.1 gate."""

    def __init__(self, message, matrix_name=None, cr=None):
        super().__init__(message)
        self.matrix_name = matrix_name
        self.cr = cr


class MissingNetwork(NetSelectError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


class UnknownNetwork(MissingNetwork):
    pass


class EmptySequence(NetSelectError, ValueError):
    pass


class MissingAlgorithm(NetSelectError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


class ConfigError(NetSelectError):
    """Base for configuration problems; the CLI maps these to exit code 2."""


class ParseError(ConfigError):
    pass


class ValidationError(ConfigError, ValueError):
    def __init__(self, message, path=None):
        where = f"{path}: " if path else ""
        super().__init__(f"{where}{message}")
        self.path = path
