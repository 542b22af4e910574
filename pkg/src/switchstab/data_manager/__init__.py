"""Writers for CSV and JSON results."""

from .result_writer import ResultWriter, frame_to_csv, read_result_csv, to_json

__all__ = [
    'ResultWriter',
    'frame_to_csv',
    'read_result_csv',
    'to_json',
]
