import math
import os

import yaml
from pyfakefs.fake_filesystem_unittest import TestCase

from climate_front.utils.config import (
    BaseConfig,
    ConfigValidator,
    locate_config_file,
)


class TestConfigValidator(TestCase):

    def test_finite_type(self):
        """ConfigValidator finite type rejects NaN, infinity and booleans"""
        validator = ConfigValidator({'x': {'type': 'finite'}})
        self.assertTrue(validator.validate({'x': 1}))
        self.assertTrue(validator.validate({'x': -2.5}))
        for value in (math.nan, math.inf, True, '1.0'):
            self.assertFalse(validator.validate({'x': value}))

    def test_positive_rule(self):
        """ConfigValidator positive rule rejects zero and negative numbers"""
        validator = ConfigValidator({'x': {'type': 'finite', 'positive': True}})
        self.assertTrue(validator.validate({'x': 1e-12}))
        self.assertFalse(validator.validate({'x': 0.0}))
        self.assertEqual(validator.errors, {'x': ['must be positive']})


class TestLocateConfigFile(TestCase):

    def setUp(self):
        self.setUpPyfakefs()
        self.default_path = os.path.expanduser(
            '~/.config/climate_front/lab.yml'
        )

    def test_missing_user_file(self):
        """locate_config_file fails on a missing user specified file"""
        with self.assertRaises(ValueError):
            locate_config_file('lab', '/missing.yml')

    def test_user_file(self):
        """locate_config_file returns an existent user specified file"""
        self.fs.create_file('/configs/run.yml')
        self.assertEqual(
            locate_config_file('lab', '/configs/run.yml'), '/configs/run.yml'
        )

    def test_default_location(self):
        """locate_config_file falls back to the default location"""
        self.assertIsNone(locate_config_file('lab'))
        self.fs.create_file(self.default_path)
        self.assertEqual(locate_config_file('lab'), self.default_path)


class TestBaseConfig(TestCase):

    def setUp(self):
        self.setUpPyfakefs()
        self.schema = {
            'name': {'type': 'string', 'required': True},
            'size': {'type': 'integer', 'min': 1},
        }

    def test_layers(self):
        """BaseConfig layers file values and command line arguments"""
        with open('/config.yml', 'w') as fd:
            yaml.dump({'name': 'file', 'size': 2}, fd)
        config = BaseConfig(
            {'name': 'default', 'size': 1},
            '/config.yml',
            self.schema,
            size=5,
            name=None,
            unknown=3,
        )
        self.assertEqual(config.name, 'file')
        self.assertEqual(config.size, 5)
        self.assertNotIn('unknown', dir(config))
        with self.assertRaises(AttributeError):
            config.unknown

    def test_validation_error(self):
        """BaseConfig reports field names of invalid values"""
        with self.assertRaisesRegex(ValueError, 'size: min value is 1'):
            BaseConfig({'name': 'x', 'size': 0}, schema=self.schema)

    def test_not_a_mapping(self):
        """BaseConfig rejects YAML documents that are not key-value maps"""
        with open('/config.yml', 'w') as fd:
            fd.write('- 1\n- 2\n')
        with self.assertRaises(ValueError):
            BaseConfig({'name': 'x'}, '/config.yml', self.schema)

    def test_as_dict_is_a_copy(self):
        config = BaseConfig({'name': 'x', 'size': 1}, schema=self.schema)
        document = config.as_dict()
        document['size'] = 10
        self.assertEqual(config.size, 1)
