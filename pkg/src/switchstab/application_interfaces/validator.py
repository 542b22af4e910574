"""
Loads switched-system spec files (JSON, or YAML for ``.yml``/``.yaml``) and
validates them against the package JSON schemas.
"""

import copy
import json
import logging
from importlib.resources import files
from pathlib import Path
from typing import Any, Dict, Union

import jsonschema
import yaml
from referencing import Registry, Resource
from referencing.jsonschema import DRAFT202012

from switchstab.exceptions import SpecParsingError, SpecValidationError

logger = logging.getLogger(__name__)

ROOT_SCHEMA = 'main.schema.json'
REF_SCHEMAS = [
    'matrix.schema.json',
    'generator.schema.json',
]
URN_PREFIX = 'urn:switchstab:config:'
YAML_SUFFIXES = ('.yml', '.yaml')


def _load_schema_from_file(schema_file: str) -> Dict[str, Any]:
    """
    Loads a JSON schema shipped in the package ``config`` directory.

    Raises
    ------
    FileNotFoundError
        If the schema file is not among the package resources.
    """
    schema_path = files('switchstab') / 'config' / schema_file
    try:
        with schema_path.open('r', encoding='utf-8') as f:
            return json.load(f)
    except FileNotFoundError as err:
        raise FileNotFoundError(f'Schema file {schema_file} not found in package resources') from err


def _error_path(error: jsonschema.ValidationError) -> str:
    path = '$'
    for part in error.absolute_path:
        path += f'[{part}]' if isinstance(part, int) else f'.{part}'
    return path


class SpecValidator:
    """
    Validates system spec documents and fills in schema defaults.

    Attributes
    ----------
    schema_content : dict
        The root schema.
    """

    def __init__(self) -> None:
        self.__registry = self._registry()
        self.__validator = jsonschema.Draft202012Validator(
            self.__registry.contents(URN_PREFIX + ROOT_SCHEMA), registry=self.__registry
        )

    @staticmethod
    def _registry() -> Registry:
        registry = Registry()
        for schema_file in [ROOT_SCHEMA, *REF_SCHEMAS]:
            contents = _load_schema_from_file(schema_file)
            try:
                jsonschema.Draft202012Validator.check_schema(contents)
            except jsonschema.SchemaError as e:
                raise ValueError(f'Schema {schema_file} is invalid: {e.message}') from e
            resource = Resource(contents=contents, specification=DRAFT202012)
            registry = registry.with_resource(uri=URN_PREFIX + schema_file, resource=resource)
        return registry

    @property
    def schema_content(self) -> Dict[str, Any]:
        return self.__validator.schema

    def _resolve(self, schema: Dict[str, Any]) -> Dict[str, Any]:
        while '$ref' in schema:
            schema = self.__registry.resolver().lookup(schema['$ref']).contents
        return schema

    def _schema_matches(self, schema: Dict[str, Any], data: Any) -> bool:
        return jsonschema.Draft202012Validator(schema, registry=self.__registry).is_valid(data)

    def _apply_defaults(self, schema_content: Dict[str, Any], config_data: Any) -> Any:
        """
        Recursively fill properties missing from ``config_data`` with their
        schema defaults. For ``oneOf``/``anyOf`` only the matching branch applies.
        """
        schema_content = self._resolve(schema_content)
        if not isinstance(config_data, dict):
            return config_data

        for conditional_key in ['allOf', 'anyOf', 'oneOf']:
            for sub_schema in schema_content.get(conditional_key, []):
                if conditional_key == 'allOf' or self._schema_matches(sub_schema, config_data):
                    config_data = self._apply_defaults(sub_schema, config_data)

        for key, prop_schema in schema_content.get('properties', {}).items():
            prop_schema = self._resolve(prop_schema)
            if key not in config_data:
                if 'default' in prop_schema:
                    config_data[key] = copy.deepcopy(prop_schema['default'])
            elif prop_schema.get('type') == 'object':
                config_data[key] = self._apply_defaults(prop_schema, config_data[key])
            elif prop_schema.get('type') == 'array' and isinstance(config_data[key], list):
                item_schema = prop_schema.get('items', {})
                config_data[key] = [self._apply_defaults(item_schema, item) for item in config_data[key]]
        return config_data

    def validate(self, document: Any, source: str = '<document>') -> Dict[str, Any]:
        """
        Validate a parsed document and return a copy with defaults applied.

        Raises
        ------
        SpecValidationError
            With the JSON path of the offending field.
        """
        error = jsonschema.exceptions.best_match(self.__validator.iter_errors(document))
        if error is not None:
            raise SpecValidationError(f'{source}: {_error_path(error)}: {error.message}')
        return self._apply_defaults(self.schema_content, copy.deepcopy(document))

    def load_document(self, spec_file: Union[str, Path]) -> Any:
        """
        Parse a spec file without validating it.

        Raises
        ------
        SpecParsingError
            If the file cannot be read or parsed; reports line and column.
        """
        path = Path(spec_file)
        try:
            text = path.read_text(encoding='utf-8')
        except OSError as e:
            raise SpecParsingError(f'cannot read spec file {path}: {e}') from e

        if path.suffix.lower() in YAML_SUFFIXES:
            try:
                return yaml.safe_load(text)
            except yaml.YAMLError as e:
                mark = getattr(e, 'problem_mark', None)
                where = f':{mark.line + 1}:{mark.column + 1}' if mark is not None else ''
                raise SpecParsingError(f'{path}{where}: {getattr(e, "problem", None) or e}') from e
        try:
            return json.loads(text)
        except json.JSONDecodeError as e:
            raise SpecParsingError(f'{path}:{e.lineno}:{e.colno}: {e.msg}') from e

    def validate_file(self, spec_file: Union[str, Path]) -> Dict[str, Any]:
        """Parse, validate and default-populate a spec file."""
        document = self.load_document(spec_file)
        config = self.validate(document, source=str(spec_file))
        logger.debug(f'validated spec file {spec_file}')
        return config
