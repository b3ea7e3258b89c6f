"""climate_front.lab_config module unit tests."""

import math
import os

import yaml
from pyfakefs.fake_filesystem_unittest import TestCase

from climate_front.lab_config import LabConfig
from tests.fixtures.lab import REFERENCE

__all__ = ['TestLabConfig']


class TestLabConfig(TestCase):

    def setUp(self):
        self.setUpPyfakefs()
        self.config_file = os.path.expanduser(
            '~/.config/climate_front/lab.yml'
        )
        os.makedirs(os.path.dirname(self.config_file))
        self.default_config = LabConfig(document=dict(REFERENCE))

    def write_config(self, data, comment=None):
        with open(self.config_file, 'w') as fd:
            if comment:
                fd.write('# {0}\n'.format(comment))
            yaml.dump(data, fd, default_flow_style=False)

    def test_default_values(self):
        """LabConfig provides default values"""
        defaults = {
            'l0': 1.0,
            'relaxed': False,
            'climate_kind': 'linear',
            'mu_kind': 'affine',
            'mu0': 1.0,
            'mu_slope': 0.0,
            'initial_shape': 'cosine',
            'sigma': 1.0,
            'initial_points': 1025,
            'bvp_dx': None,
            'n_points': 2048,
            'max_dx': 0.02,
            'dt_factor': 0.25,
            'dt_max': 2e-3,
            'fixed_dt': None,
            't_max': 100.0,
            'vanish_window': 0.5,
            'sigma_cap': 1e3,
            'out_dir': 'climate_front_output',
            'threads': 4,
            'sentry_dsn': '',
            'sentry_environment': 'dev',
        }
        for key, value in defaults.items():
            self.assertEqual(getattr(self.default_config, key), value)
        self.assertEqual(self.default_config.params.mode, 'strict')

    def test_values_from_config(self):
        """LabConfig extracts data from config file"""
        data = dict(REFERENCE, c=0.2, n_points=512, climate_kind='cubic')
        self.write_config(data)
        config = LabConfig(self.config_file)
        for key, value in data.items():
            self.assertEqual(getattr(config, key), value)
        self.assertEqual(config.climate.kind, 'cubic')

    def test_command_line_arguments(self):
        """LabConfig applies only non-None command line arguments"""
        self.write_config(REFERENCE)
        config = LabConfig(self.config_file, out_dir=None, threads=8)
        self.assertEqual(config.threads, 8)
        self.assertEqual(config.out_dir, 'climate_front_output')

    def test_required_fields(self):
        """LabConfig names missing required fields"""
        with self.assertRaises(ValueError) as context:
            LabConfig()
        message = str(context.exception)
        for key in ('d', 'a', 'a0', 'b', 'c', 'h0'):
            self.assertRegex(message, r'(^|\. ){0}: '.format(key))

    def test_invalid_values(self):
        """LabConfig rejects non-positive rates and unknown families"""
        with self.assertRaisesRegex(ValueError, 'd: must be positive'):
            LabConfig(document=dict(REFERENCE, d=-1.0))
        with self.assertRaisesRegex(ValueError, 'initial_shape'):
            LabConfig(document=dict(REFERENCE, initial_shape='gaussian'))
        with self.assertRaisesRegex(ValueError, 'vanish_window'):
            LabConfig(document=dict(REFERENCE, vanish_window=1.5))

    def test_unknown_key(self):
        """LabConfig rejects unknown keys in the config file"""
        self.write_config(dict(REFERENCE, speed=3.0))
        with self.assertRaisesRegex(ValueError, 'speed'):
            LabConfig(self.config_file)

    def test_integers_are_coerced(self):
        """LabConfig stores numeric model values as floats"""
        config = LabConfig(document=dict(REFERENCE, d=1, h0=2))
        self.assertIsInstance(config.d, float)
        self.assertEqual(config.config_hash, self.default_config.config_hash)

    def test_config_hash_ignores_comments_and_runtime_keys(self):
        """LabConfig hash only depends on result-affecting values"""
        self.write_config(
            dict(REFERENCE, out_dir='/elsewhere', threads=1),
            comment='reference instance',
        )
        config = LabConfig(self.config_file)
        self.assertEqual(config.config_hash, self.default_config.config_hash)
        self.assertEqual(len(config.config_hash), 64)
        other = LabConfig(document=dict(REFERENCE, c=0.25))
        self.assertNotEqual(other.config_hash, config.config_hash)

    def test_override(self):
        """LabConfig.override returns a new validated configuration"""
        config = self.default_config.override(sigma=0.1, c=0.75)
        self.assertEqual(config.sigma, 0.1)
        self.assertEqual(config.params.c, 0.75)
        self.assertEqual(self.default_config.sigma, 1.0)
        with self.assertRaises(ValueError):
            self.default_config.override(h0=0.0)

    def test_resolved_values(self):
        """LabConfig derives the BVP mesh and the vanishing start time"""
        self.assertTrue(math.isclose(self.default_config.resolved_bvp_dx, 2e-3))
        self.assertEqual(self.default_config.resolved_vanish_min_time, 25.0)
        config = self.default_config.override(
            d=4.0, bvp_dx=None, vanish_min_time=3.0
        )
        self.assertTrue(math.isclose(config.resolved_bvp_dx, 4e-3))
        self.assertEqual(config.resolved_vanish_min_time, 3.0)

    def test_initial_data(self):
        """LabConfig builds the configured initial density"""
        u0 = self.default_config.initial_data(sigma=0.5)
        self.assertEqual(u0.h0, 2.0)
        self.assertEqual(u0.values.size, 1025)
        self.assertTrue(math.isclose(u0.sup_norm, 0.5))
        self.assertEqual(u0.family, 'cosine')

    def test_expansion_rate(self):
        config = self.default_config.override(mu0=0.5, mu_slope=0.25)
        self.assertEqual(config.mu.mu0, 0.5)
        self.assertEqual(config.mu.slope, 0.25)
        self.assertEqual(config.mu.a0, -1.0)
