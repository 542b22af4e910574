"""
A convenience function to find a value in a spec document using a dot-separated pattern.
"""

from typing import Any, Dict, Union


def find_value(data: Dict, keys: str, default=None) -> Any:
    """
    Retrieves a value from a nested dictionary using dot-separated keys.
    List entries are addressed by their index.

    Example
    --------
    >>> spec = {'Q': {'states': 2, 'Q': [[-1.0, 1.0], [1.0, -1.0]]}, 'r': 2.0}
    >>> find_value(spec, 'Q.states')
    2
    >>> find_value(spec, 'matrices.0.dim', default=0)
    0
    """
    current: Union[Dict, list, Any] = data
    for key in keys.split('.'):
        if isinstance(current, dict) and key in current:
            current = current[key]
        elif isinstance(current, list) and key.isdigit() and int(key) < len(current):
            current = current[int(key)]
        else:
            return default
    return current
