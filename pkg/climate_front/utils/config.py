# -*- mode:python; coding:utf-8; -*-
# created: 2026-10-17

"""
Layered YAML configuration: defaults, then a config file, then command line
values, validated as a whole with Cerberus.
"""

import copy
import math
import numbers
import os

import cerberus
import yaml

from climate_front.utils.file_utils import normalize_path

__all__ = ['locate_config_file', 'BaseConfig', 'ConfigValidator']


DEFAULT_CONFIG_DIR = '~/.config/climate_front'


class ConfigValidator(cerberus.Validator):
    """
    Cerberus validator that knows about real-valued model constants.
    """

    def _validate_type_finite(self, value):
        # bool is a numbers.Real subclass, a YAML "yes" is not a constant
        if isinstance(value, bool) or not isinstance(value, numbers.Real):
            return False
        return math.isfinite(value)

    def _validate_positive(self, constraint, field, value):
        """
        {'type': 'boolean'}
        """
        if not constraint or not isinstance(value, numbers.Real):
            return
        if value <= 0:
            self._error(field, 'must be positive')


def locate_config_file(component, config_path=None):
    """
    Finds the configuration file of a laboratory component.

    An explicit `config_path` wins and must exist. Without it the file
    `~/.config/climate_front/{component}.yml` is used when present.

    Parameters
    ----------
    component : str
        Component name, "lab" for the command line tool.
    config_path : str, optional
        Path given on the command line.

    Returns
    -------
    str or None
        Normalized configuration file path, None when nothing was given and
        there is no file at the default location.

    Raises
    ------
    ValueError
        If the explicit path doesn't exist.
    """
    if not config_path:
        default_path = normalize_path(
            os.path.join(DEFAULT_CONFIG_DIR, '{0}.yml'.format(component))
        )
        return default_path if os.path.exists(default_path) else None
    config_path = normalize_path(config_path)
    if os.path.exists(config_path):
        return config_path
    raise ValueError('there is no configuration file {0}'.format(config_path))


def _read_yaml_mapping(config_path):
    with open(config_path, 'rb') as fd:
        document = yaml.safe_load(fd)
    if document is None:
        return {}
    if isinstance(document, dict):
        return document
    raise ValueError(
        '{0} must contain a YAML mapping, got {1}'.format(
            config_path, type(document).__name__
        )
    )


class BaseConfig(object):
    """
    Read-only attribute view over a validated configuration document.

    Keys unknown to the defaults are ignored on the command line layer,
    None command line values keep the lower layers.
    """

    def __init__(
        self, default_config, config_path=None, schema=None, **cmd_args
    ):
        """
        Parameters
        ----------
        default_config : dict
            Default values, the set of keys is the set of known options.
        config_path : str, optional
            YAML file applied on top of the defaults.
        schema : dict, optional
            Cerberus schema of the merged document.
        cmd_args : dict
            Command line values applied last.

        Raises
        ------
        ValueError
            If the file isn't a mapping or the merged document is invalid.
        """
        values = dict(default_config)
        if config_path:
            values.update(_read_yaml_mapping(config_path))
        values.update(
            (key, value)
            for key, value in cmd_args.items()
            if key in default_config and value is not None
        )
        self._values = self._validated(values, schema or {})

    @staticmethod
    def _validated(values, schema):
        validator = ConfigValidator(schema)
        if validator.validate(values):
            return validator.document
        messages = []
        for field, errors in sorted(validator.errors.items()):
            messages.append(
                '{0}: {1}'.format(field, ', '.join(map(str, errors)))
            )
        raise ValueError('. '.join(messages))

    def __getattr__(self, attr):
        # copy and pickle look up attributes before _values is assigned
        values = self.__dict__.get('_values')
        if values is None or attr not in values:
            raise AttributeError(attr)
        return values[attr]

    def __dir__(self):
        return sorted(self._values)

    def as_dict(self):
        """
        Returns a deep copy of the validated document.

        Returns
        -------
        dict
        """
        return copy.deepcopy(self._values)
