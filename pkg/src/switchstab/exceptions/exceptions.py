"""
Custom exceptions for the switchstab package.
This module defines custom exceptions that can be raised during the execution of the switchstab package.
"""


class SwitchstabException(Exception):
    """
    Base class for all exceptions in the switchstab package.
    This class inherits from the built-in Exception class.
    """

    pass


# === Configuration Exceptions ===


class SpecParsingError(SwitchstabException):
    """
    Exception raised when a system specification file cannot be read or parsed.
    """

    pass


class SpecValidationError(SwitchstabException):
    """
    Exception raised when a system specification does not conform to the expected schema.
    """

    pass


class SpecOutputError(SwitchstabException):
    """
    Exception raised when there is an error writing a specification, CSV or JSON file.
    """

    pass


class ConfigurationError(SwitchstabException):
    """
    Exception raised when configuration is invalid or cannot be loaded.
    """

    pass


class MissingConfigurationParameter(SwitchstabException):
    """
    Exception raised when a required configuration parameter is missing.
    """

    pass


# === Linear Algebra Exceptions ===


class DimensionMismatchError(SwitchstabException, ValueError):
    """
    Exception raised when matrices or vectors have incompatible shapes.
    """

    pass


class NonFiniteMatrixError(SwitchstabException, ValueError):
    """
    Exception raised when a matrix contains NaN or infinite entries.
    """

    pass


class EigenSolverError(SwitchstabException):
    """
    Exception raised when the dense eigensolver fails to converge.
    """

    pass


class OverflowRiskError(SwitchstabException):
    """
    Exception raised when a dense matrix exponential or product would overflow.
    Long horizons should be handled with the polar propagation instead.
    """

    pass


# === Markov Chain Exceptions ===


class GeneratorError(SwitchstabException, ValueError):
    """
    Base class for violations of the generator (rate matrix) invariants.
    """

    pass


class RowSumViolation(GeneratorError):
    """
    Exception raised when a generator row does not sum to zero.
    """

    def __init__(self, row: int, row_sum: float):
        self.row = row
        self.row_sum = row_sum
        super().__init__(f'Row {row} of the generator sums to {row_sum!r}, expected 0.')


class NegativeRate(GeneratorError):
    """
    Exception raised when an off-diagonal generator entry is negative.
    """

    def __init__(self, row: int, col: int, value: float):
        self.row = row
        self.col = col
        self.value = value
        super().__init__(f'Off-diagonal rate Q[{row}][{col}] = {value!r} is negative.')


class NotIrreducible(GeneratorError):
    """
    Exception raised when the transition graph of a generator is not strongly connected.
    """

    def __init__(self, component: list):
        self.component = list(component)
        super().__init__(f'Generator is not irreducible: states {self.component} cannot reach every other state.')


class InvalidWeightsError(SwitchstabException, ValueError):
    """
    Exception raised when averaging weights are not a probability vector.
    """

    pass


class EmptyHorizonError(SwitchstabException, ValueError):
    """
    Exception raised when a statistic needs a positive time horizon and the path has T = 0.
    """

    pass


# === Simulation Exceptions ===


class InvalidSystemError(SwitchstabException, ValueError):
    """
    Exception raised when matrices, generator and rate do not form a valid switched system.
    """

    pass


class HypothesisViolated(SwitchstabException):
    """
    Exception raised when a check is requested for a system that does not satisfy its hypotheses.
    """

    pass


# === Planar Analysis Exceptions ===


class DomainError(SwitchstabException, ValueError):
    """
    Exception raised when an angle or parameter lies outside the domain of an evaluator.
    """

    pass


class QuadratureError(SwitchstabException):
    """
    Exception raised when adaptive quadrature does not reach the requested tolerance
    within its panel budget.
    """

    def __init__(self, message: str, estimate: float, error: float):
        self.estimate = estimate
        self.error = error
        super().__init__(f'{message} (achieved estimate {estimate!r}, error {error!r})')


class WindowSearchError(SwitchstabException):
    """
    Exception raised when the instability window search cannot certify its result,
    e.g. the maximizer of G sits on the boundary of the scanned range.
    """

    pass


# === Construction Exceptions ===


class NoWindow(SwitchstabException):
    """
    Exception raised when the planar block has no instability window (alpha too large).
    """

    pass


class ScaleTooSmall(SwitchstabException, ValueError):
    """
    Exception raised when the scale factor N does not separate consecutive windows.
    """

    pass


class ScaleUnderflow(SwitchstabException, ValueError):
    """
    Exception raised when the smallest block coupling falls below the supported scale.
    """

    pass
