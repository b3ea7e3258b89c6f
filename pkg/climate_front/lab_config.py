# -*- mode:python; coding:utf-8; -*-
# created: 2026-10-17

"""
Free boundary laboratory run configuration storage.
"""

import math

import pydantic

from climate_front.constants import DEFAULT_DX_SCALE
from climate_front.environment.climate import make_climate, make_expansion_rate
from climate_front.environment.initial_data import make_initial_bump
from climate_front.models import ModelParams
from climate_front.utils.config import BaseConfig
from climate_front.utils.hashing import hash_document

DEFAULT_OUT_DIR = 'climate_front_output'
DEFAULT_THREADS_COUNT = 4
DEFAULT_SENTRY_DSN = ''
DEFAULT_SENTRY_ENVIRONMENT = 'dev'
DEFAULT_SENTRY_TRACES_SAMPLE_RATE = 0.0
DEFAULT_N_POINTS = 2048
DEFAULT_MAX_DX = 0.02
DEFAULT_INITIAL_POINTS = 1025
DEFAULT_T_MAX = 100.0

# runtime-only keys never change results and are left out of the hash
RUNTIME_KEYS = (
    'out_dir',
    'threads',
    'sentry_dsn',
    'sentry_environment',
    'sentry_traces_sample_rate',
)

REQUIRED_KEYS = ('d', 'a', 'a0', 'b', 'c', 'h0')

__all__ = ['LabConfig', 'RUNTIME_KEYS', 'REQUIRED_KEYS']


def _number(**rules):
    schema = {
        'type': 'finite',
        'coerce': float,
        'required': True,
        'nullable': False,
    }
    schema.update(rules)
    return schema


def _optional_number(**rules):
    schema = {
        'type': 'finite',
        'coerce': float,
        'required': False,
        'nullable': True,
    }
    schema.update(rules)
    return schema


def _integer(minimum):
    return {'type': 'integer', 'min': minimum, 'required': True}


class LabConfig(BaseConfig):
    """
    Run configuration storage: model constants, initial data descriptor,
    numeric settings and output options.

    Attributes
    ----------
    d, a, a0, b, c, h0 : float
        Required model constants.
    l0 : float
        Climate transition width.
    relaxed : bool
        Allow a0 >= 0 (homogeneous reduction runs).
    climate_kind : str
        Transition zone interpolation, "linear" or "cubic".
    mu0, mu_slope : float
        Affine expansion rate mu(zeta) = mu0 + mu_slope * (zeta - a0).
    initial_shape, sigma, initial_points
        Initial density family, amplitude and sample count.
    n_points, max_dx, dt_factor, dt_max, fixed_dt, t_max
        Free boundary solver resolution and time horizon.
    out_dir : str
        Output files directory.
    threads : int
        Worker pool size for scans and sweeps.

    See docs/config.md for the complete list.
    """

    def __init__(self, config_file=None, document=None, **cmd_args):
        """
        Run configuration initialization.

        Parameters
        ----------
        config_file : str, optional
            Configuration file path.
        document : dict, optional
            Complete configuration document applied on top of the defaults,
            None values included.
        cmd_args : dict
            Command line arguments.

        Raises
        ------
        ValueError
            If configuration didn't pass validation.
        """
        default_config = {
            'd': None,
            'a': None,
            'a0': None,
            'b': None,
            'c': None,
            'h0': None,
            'l0': 1.0,
            'relaxed': False,
            'climate_kind': 'linear',
            'mu_kind': 'affine',
            'mu0': 1.0,
            'mu_slope': 0.0,
            'initial_shape': 'cosine',
            'sigma': 1.0,
            'initial_points': DEFAULT_INITIAL_POINTS,
            'bvp_dx': None,
            'bvp_tol': 1e-9,
            'truncation_tol': 1e-8,
            'speed_tol': 1e-9,
            'l0_tol': 1e-8,
            'max_newton_iterations': 100,
            'n_points': DEFAULT_N_POINTS,
            'dt_factor': 0.25,
            'dt_max': 2e-3,
            'fixed_dt': None,
            't_max': DEFAULT_T_MAX,
            'sample_every': 0.1,
            'snapshot_every': None,
            'predictor_corrector': False,
            'max_dx': DEFAULT_MAX_DX,
            'interior_window': 10.0,
            'vanish_rel_density': 1e-4,
            'vanish_rel_growth': 1e-3,
            'vanish_window': 0.5,
            'gap_window': 0.1,
            'vanish_min_time': None,
            'sigma_lo': 1e-3,
            'sigma_hi': 1.0,
            'sigma_rel_tol': 1e-2,
            'sigma_cap': 1e3,
            'out_dir': DEFAULT_OUT_DIR,
            'threads': DEFAULT_THREADS_COUNT,
            'sentry_dsn': DEFAULT_SENTRY_DSN,
            'sentry_environment': DEFAULT_SENTRY_ENVIRONMENT,
            'sentry_traces_sample_rate': DEFAULT_SENTRY_TRACES_SAMPLE_RATE,
        }
        if document:
            default_config.update(document)
        schema = {
            'd': _number(positive=True),
            'a': _number(positive=True),
            'a0': _number(),
            'b': _number(positive=True),
            'c': _number(positive=True),
            'h0': _number(positive=True),
            'l0': _number(positive=True),
            'relaxed': {'type': 'boolean', 'required': True},
            'climate_kind': {
                'type': 'string',
                'allowed': ['linear', 'cubic'],
                'required': True,
            },
            'mu_kind': {
                'type': 'string',
                'allowed': ['affine'],
                'required': True,
            },
            'mu0': _number(positive=True),
            'mu_slope': _number(min=0),
            'initial_shape': {
                'type': 'string',
                'allowed': ['cosine', 'quadratic'],
                'required': True,
            },
            'sigma': _number(positive=True),
            'initial_points': _integer(3),
            'bvp_dx': _optional_number(positive=True),
            'bvp_tol': _number(positive=True),
            'truncation_tol': _number(positive=True),
            'speed_tol': _number(positive=True),
            'l0_tol': _number(positive=True),
            'max_newton_iterations': _integer(1),
            'n_points': _integer(16),
            'dt_factor': _number(positive=True),
            'dt_max': _number(positive=True),
            'fixed_dt': _optional_number(positive=True),
            't_max': _number(positive=True),
            'sample_every': _number(positive=True),
            'snapshot_every': _optional_number(positive=True),
            'predictor_corrector': {'type': 'boolean', 'required': True},
            'max_dx': _optional_number(positive=True),
            'interior_window': _number(min=0),
            'vanish_rel_density': _number(positive=True),
            'vanish_rel_growth': _number(positive=True),
            'vanish_window': _number(positive=True, max=1),
            'gap_window': _number(positive=True, max=1),
            'vanish_min_time': _optional_number(min=0),
            'sigma_lo': _number(positive=True),
            'sigma_hi': _number(positive=True),
            'sigma_rel_tol': _number(positive=True),
            'sigma_cap': _number(positive=True),
            'out_dir': {'type': 'string', 'required': True},
            'threads': _integer(1),
            'sentry_dsn': {'type': 'string', 'nullable': True},
            'sentry_environment': {'type': 'string', 'nullable': True},
            'sentry_traces_sample_rate': _optional_number(min=0, max=1),
        }
        super(LabConfig, self).__init__(
            default_config, config_file, schema, **cmd_args
        )
        try:
            self.__params = ModelParams(
                **{key: getattr(self, key) for key in REQUIRED_KEYS},
                l0=self.l0,
                relaxed=self.relaxed,
            )
        except pydantic.ValidationError as error:
            raise ValueError(str(error))

    def override(self, **values):
        """
        Returns a new validated configuration with the given values replaced.

        Parameters
        ----------
        values : dict
            Replacement values, None is a legitimate value here.

        Returns
        -------
        LabConfig
        """
        document = self.as_dict()
        document.update(values)
        return LabConfig(document=document)

    @property
    def params(self):
        """
        Problem constants.

        Returns
        -------
        climate_front.models.ModelParams
        """
        return self.__params

    @property
    def climate(self):
        return make_climate(self.__params, self.climate_kind)

    @property
    def mu(self):
        return make_expansion_rate(
            self.__params, self.mu0, self.mu_slope, self.mu_kind
        )

    def initial_data(self, sigma=None):
        """
        Builds the configured initial density.

        Parameters
        ----------
        sigma : float, optional
            Amplitude overriding the configured one.

        Returns
        -------
        climate_front.environment.initial_data.InitialData
        """
        return make_initial_bump(
            self.h0,
            self.sigma if sigma is None else sigma,
            self.initial_shape,
            self.initial_points,
        )

    @property
    def resolved_bvp_dx(self):
        if self.bvp_dx is not None:
            return self.bvp_dx
        return DEFAULT_DX_SCALE * math.sqrt(self.d / self.a)

    @property
    def resolved_vanish_min_time(self):
        if self.vanish_min_time is not None:
            return self.vanish_min_time
        return 0.25 * self.t_max

    def hashable_document(self):
        """
        Returns the configuration values that affect results.

        Returns
        -------
        dict
        """
        document = self.as_dict()
        for key in RUNTIME_KEYS:
            document.pop(key, None)
        return document

    @property
    def config_hash(self):
        """
        sha256 of the canonical JSON text of the result-affecting values.

        Returns
        -------
        str
        """
        return hash_document(self.hashable_document())
