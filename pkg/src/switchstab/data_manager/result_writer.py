"""
Result Writer
=============

Writes command results as CSV tables and JSON documents. Floats are written
with 17 significant digits so every value reads back unchanged.
"""

import json
from pathlib import Path
from typing import Any, Optional, Sequence, Union

import numpy as np
import pandas as pd

from switchstab.exceptions import SpecOutputError

FLOAT_FORMAT = '%.17g'
COMMENT = '#'


def _json_default(value: Any) -> Any:
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    raise TypeError(f'{type(value).__name__} is not JSON serializable')


def frame_to_csv(frame: pd.DataFrame, footer: Optional[Sequence[str]] = None) -> str:
    """CSV text of ``frame`` with optional ``# ...`` footer lines."""
    text = frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
    for line in footer or ():
        text += f'{COMMENT} {line}\n'
    return text


def to_json(data: Any) -> str:
    return json.dumps(data, indent=2, default=_json_default) + '\n'


def read_result_csv(path: Union[str, Path]) -> pd.DataFrame:
    """Read a CSV written by :class:`ResultWriter`, skipping footer lines."""
    return pd.read_csv(path, comment=COMMENT, float_precision='round_trip')


class ResultWriter:
    """
    Writes CSV and JSON results into an output directory.

    Attributes
    ----------
    output_dir : pathlib.Path
        Directory receiving the files; created on demand.
    """

    def __init__(self, output_dir: Union[str, Path] = '.'):
        self.output_dir = Path(output_dir)

    def _target(self, filename: Union[str, Path], suffix: str) -> Path:
        path = Path(filename)
        if path.suffix.lower() != suffix:
            raise SpecOutputError(f'output file {path} must have a {suffix} extension')
        target = path if path.is_absolute() else self.output_dir / path
        try:
            target.parent.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise SpecOutputError(f'cannot create directory {target.parent}: {e}') from e
        return target

    def _write(self, target: Path, text: str) -> Path:
        try:
            target.write_text(text, encoding='utf-8')
        except OSError as e:
            raise SpecOutputError(f'error writing {target}: {e}') from e
        return target

    def write_csv(self, frame: pd.DataFrame, filename: Union[str, Path], footer: Optional[Sequence[str]] = None) -> Path:
        """
        Write ``frame`` to ``filename`` (a ``.csv`` path).

        Returns
        -------
        pathlib.Path
            Path to the written file.
        """
        return self._write(self._target(filename, '.csv'), frame_to_csv(frame, footer))

    def write_json(self, data: Any, filename: Union[str, Path]) -> Path:
        """Write ``data`` to ``filename`` (a ``.json`` path)."""
        return self._write(self._target(filename, '.json'), to_json(data))
