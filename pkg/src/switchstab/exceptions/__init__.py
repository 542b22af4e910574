"""Custom exceptions go in this directory."""

from .exceptions import (
    SwitchstabException,
    SpecParsingError,
    SpecValidationError,
    SpecOutputError,
    ConfigurationError,
    MissingConfigurationParameter,
    DimensionMismatchError,
    NonFiniteMatrixError,
    EigenSolverError,
    OverflowRiskError,
    GeneratorError,
    RowSumViolation,
    NegativeRate,
    NotIrreducible,
    InvalidWeightsError,
    EmptyHorizonError,
    InvalidSystemError,
    HypothesisViolated,
    DomainError,
    QuadratureError,
    WindowSearchError,
    NoWindow,
    ScaleTooSmall,
    ScaleUnderflow,
)

__all__ = [
    'SwitchstabException',
    'SpecParsingError',
    'SpecValidationError',
    'SpecOutputError',
    'ConfigurationError',
    'MissingConfigurationParameter',
    'DimensionMismatchError',
    'NonFiniteMatrixError',
    'EigenSolverError',
    'OverflowRiskError',
    'GeneratorError',
    'RowSumViolation',
    'NegativeRate',
    'NotIrreducible',
    'InvalidWeightsError',
    'EmptyHorizonError',
    'InvalidSystemError',
    'HypothesisViolated',
    'DomainError',
    'QuadratureError',
    'WindowSearchError',
    'NoWindow',
    'ScaleTooSmall',
    'ScaleUnderflow',
]
