"""
Configuration Controller
========================

Reads system spec files, applies default values, and provides the validated
spec to the rest of the package.
"""

from abc import ABC, abstractmethod
from copy import deepcopy
from pathlib import Path
from typing import Any, Dict, Optional, Union

from switchstab.application_interfaces.find import find_value
from switchstab.application_interfaces.validator import SpecValidator
from switchstab.exceptions import ConfigurationError


class Controller(ABC):
    """
    Abstract base class for configuration controllers.
    """

    @abstractmethod
    def load_config(self, config_file: str) -> None:
        """
        Reads the configuration file and applies default values.
        """

    @abstractmethod
    def get_config(self) -> Dict[str, Any]:
        """
        Returns the current configuration.
        """

    @abstractmethod
    def get(self, keys: str, default=None) -> Any:
        """
        Retrieves a value from the configuration data using a dot-separated key.
        """


class ConfigurationController(Controller):
    """
    Holds one validated system spec.

    Attributes
    ----------
    config : str or None
        Path of the spec file.
    config_data : dict
        The validated spec with defaults applied.
    """

    def __init__(self, config_file: Optional[Union[str, Path]] = None) -> None:
        self.config = str(config_file) if config_file is not None else None
        self.config_data: Dict[str, Any] = {}

    def load_config(self, config_file: Optional[Union[str, Path]] = None) -> None:
        """
        Validates ``config_file`` (or the file given at construction) and stores it.

        Raises
        ------
        ConfigurationError
            If no file was given at all.
        """
        if config_file is None and self.config is None:
            raise ConfigurationError('A spec file path must be provided to the ConfigurationController.')
        if config_file is not None:
            self.config = str(config_file)
        self.config_data = SpecValidator().validate_file(self.config)

    def get_config(self) -> Dict[str, Any]:
        if not self.config_data:
            self.load_config()
        return self.config_data

    def get(self, keys: str, default=None) -> Any:
        """
        Value at a dot-separated key, e.g. ``'Q.states'`` or ``'matrices.0.rows'``.
        """
        return find_value(deepcopy(self.get_config()), keys, default)
