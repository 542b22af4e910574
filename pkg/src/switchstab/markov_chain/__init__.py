"""Continuous-time Markov chain machinery for the switching signal."""

from .generator import (
    Generator,
    as_generator,
    embedded_visit_distribution,
    expected_jump_rate,
    stationary,
    validate_generator,
)
from .jump_path import (
    JumpPath,
    mean_holding_times,
    occupation_fractions,
    sample_path,
    sample_path_from,
    visit_fractions,
)
from .random_streams import StreamPurpose, replica_stream

__all__ = [
    'Generator',
    'as_generator',
    'embedded_visit_distribution',
    'expected_jump_rate',
    'stationary',
    'validate_generator',
    'JumpPath',
    'mean_holding_times',
    'occupation_fractions',
    'sample_path',
    'sample_path_from',
    'visit_fractions',
    'StreamPurpose',
    'replica_stream',
]
