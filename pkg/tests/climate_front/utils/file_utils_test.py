import hashlib
import os

import numpy as np
import pytest
from pyfakefs.fake_filesystem_unittest import TestCase

from climate_front.utils import file_utils


class TestFileUtils(TestCase):

    def setUp(self):
        self.setUpPyfakefs()

    def test_hash_file(self):
        self.fs.create_file('/empty.csv', contents=b'')
        assert (
            file_utils.hash_file('/empty.csv')
            == hashlib.sha256(b'').hexdigest()
        )
        self.fs.create_file('/run.csv', contents=b'# x,v\n0,1\n')
        digest = file_utils.hash_file('/run.csv', 'sha1', buff_size=3)
        assert digest == hashlib.sha1(b'# x,v\n0,1\n').hexdigest()

    def test_safe_mkdir(self):
        assert file_utils.safe_mkdir('/out/runs')
        assert not file_utils.safe_mkdir('/out/runs')
        self.fs.create_file('/out/table.csv')
        with self.assertRaises(IOError):
            file_utils.safe_mkdir('/out/table.csv')

    def test_normalize_path(self):
        home = os.path.expanduser('~')
        assert file_utils.normalize_path('~/runs/../out') == os.path.join(
            home, 'out'
        )

    def test_jsonl_round_trip(self):
        records = [{'verdict': 'Spreading', 'h': 2.5}, {'verdict': 'Vanishing'}]
        file_utils.write_jsonl(
            '/out/runs.jsonl', records, header={'config_hash': 'abc'}
        )
        with open('/out/runs.jsonl') as fd:
            lines = fd.read().splitlines()
        assert lines[0] == '# config_hash: abc'
        assert lines[1] == '{"h": 2.5, "verdict": "Spreading"}'
        assert file_utils.read_jsonl('/out/runs.jsonl') == records
        assert file_utils.read_header('/out/runs.jsonl') == {
            'config_hash': 'abc'
        }


def test_write_table(tmp_path):
    path = str(tmp_path / 'sub' / 'table.csv')
    file_utils.write_table(
        path,
        ['x', 'v'],
        [[0.0, 1.0 / 3.0], [1.0, 2.0]],
        header={'config_hash': 'abc', 'c': 0.5},
    )
    with open(path) as fd:
        lines = fd.read().splitlines()
    assert lines[:3] == ['# c: 0.5', '# config_hash: abc', '# x,v']
    assert lines[3] == '0,0.333333333333'
    assert file_utils.read_header(path) == {'c': '0.5', 'config_hash': 'abc'}
    columns, data = file_utils.read_table(path)
    assert columns == ['x', 'v']
    np.testing.assert_allclose(data, [[0.0, 0.333333333333], [1.0, 2.0]])


def test_write_table_checks_columns(tmp_path):
    with pytest.raises(ValueError):
        file_utils.write_table(str(tmp_path / 't.csv'), ['x'], [[1.0, 2.0]])


def test_write_table_is_deterministic(tmp_path):
    rows = np.linspace(0.0, 1.0, 15).reshape(5, 3) / 7.0
    paths = [str(tmp_path / name) for name in ('a.csv', 'b.csv')]
    for path in paths:
        file_utils.write_table(path, ['p', 'q', 'r'], rows, {'k': 'v'})
    assert file_utils.hash_file(paths[0]) == file_utils.hash_file(paths[1])
