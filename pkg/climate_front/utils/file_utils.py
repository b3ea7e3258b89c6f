# -*- mode:python; coding:utf-8; -*-
# created: 2026-10-17

"""
CSV and JSON lines result files with "# key: value" provenance headers.
"""

import errno
import json
import os

import numpy as np

from climate_front.constants import CSV_FORMAT
from climate_front.utils.hashing import get_hasher

__all__ = [
    'hash_file',
    'normalize_path',
    'safe_mkdir',
    'write_table',
    'read_table',
    'read_header',
    'write_jsonl',
    'read_jsonl',
]


def hash_file(file_path, hash_type='sha256', buff_size=1048576):
    """
    Returns the hexadecimal digest of a result file. Reruns of the same
    configuration must produce files with equal digests.

    Parameters
    ----------
    file_path : str
        File path.
    hash_type : str, optional
        hashlib algorithm name.
    buff_size : int, optional
        Number of bytes to read at once.

    Returns
    -------
    str
    """
    hasher = get_hasher(hash_type)
    with open(file_path, 'rb') as fd:
        for chunk in iter(lambda: fd.read(buff_size), b''):
            hasher.update(chunk)
    return hasher.hexdigest()


def normalize_path(path):
    """
    Expands "~" and environment variables and makes the path absolute.

    Parameters
    ----------
    path : str

    Returns
    -------
    str
    """
    expanded = os.path.expanduser(os.path.expandvars(path))
    return os.path.abspath(expanded)


def safe_mkdir(path, mode=0o750):
    """
    Makes an output directory together with its missing parents.

    Parameters
    ----------
    path : str
        Directory to create.
    mode : int, optional
        Permission bits of the created directories.

    Returns
    -------
    bool
        False when the directory was already there.

    Raises
    ------
    IOError
        If the path exists and isn't a directory.
    """
    if os.path.isdir(path):
        return False
    if os.path.lexists(path):
        raise IOError(
            errno.ENOTDIR, 'output path {0} is not a directory'.format(path)
        )
    os.makedirs(path, mode)
    return True


def _header_lines(columns, header):
    lines = ['{0}: {1}'.format(key, header[key]) for key in sorted(header)]
    lines.append(','.join(columns))
    return '\n'.join(lines)


def write_table(file_path, columns, rows, header=None):
    """
    Writes a numeric table to a CSV file. Every metadata item becomes a
    "# key: value" comment line, the last comment line lists the column
    names.

    Parameters
    ----------
    file_path : str
        Output file path. Missing parent directories are created.
    columns : list of str
        Column names.
    rows : array_like
        Two-dimensional array of shape (n, len(columns)).
    header : dict, optional
        Metadata (e.g. config_hash) to record in the file header.
    """
    data = np.atleast_2d(np.asarray(rows, dtype=float))
    if data.size == 0:
        data = data.reshape(0, len(columns))
    if data.shape[1] != len(columns):
        raise ValueError(
            'table has {0} columns, {1} names given'.format(
                data.shape[1], len(columns)
            )
        )
    parent = os.path.dirname(os.path.abspath(file_path))
    safe_mkdir(parent)
    np.savetxt(
        file_path,
        data,
        fmt=CSV_FORMAT,
        delimiter=',',
        header=_header_lines(columns, header or {}),
        comments='# ',
    )


def read_header(file_path):
    """
    Extracts "# key: value" metadata from a CSV or JSON-lines file header.

    Parameters
    ----------
    file_path : str
        File path.

    Returns
    -------
    dict
        Metadata found in the leading comment lines.
    """
    header = {}
    with open(file_path, 'r') as fd:
        for line in fd:
            if not line.startswith('#'):
                break
            key, sep, value = line[1:].strip().partition(': ')
            if sep:
                header[key] = value
    return header


def read_table(file_path):
    """
    Reads a CSV file written by `write_table`.

    Parameters
    ----------
    file_path : str
        File path.

    Returns
    -------
    tuple
        Column names list and a two-dimensional float array.
    """
    columns = []
    with open(file_path, 'r') as fd:
        for line in fd:
            if not line.startswith('#'):
                break
            text = line[1:].strip()
            if ': ' not in text:
                columns = text.split(',')
    data = np.loadtxt(file_path, delimiter=',', comments='#', ndmin=2)
    if data.size == 0:
        data = data.reshape(0, len(columns))
    return columns, data


def write_jsonl(file_path, records, header=None):
    """
    Writes records to a JSON-lines file, one sorted-keys object per line.

    Parameters
    ----------
    file_path : str
        Output file path.
    records : iterable of dict
        JSON compatible records.
    header : dict, optional
        Metadata written as leading "# key: value" comment lines.
    """
    parent = os.path.dirname(os.path.abspath(file_path))
    safe_mkdir(parent)
    with open(file_path, 'w') as fd:
        for key in sorted(header or {}):
            fd.write('# {0}: {1}\n'.format(key, header[key]))
        for record in records:
            fd.write(json.dumps(record, sort_keys=True))
            fd.write('\n')


def read_jsonl(file_path):
    """
    Reads records from a JSON-lines file written by `write_jsonl`.

    Parameters
    ----------
    file_path : str
        File path.

    Returns
    -------
    list of dict
    """
    records = []
    with open(file_path, 'r') as fd:
        for line in fd:
            line = line.strip()
            if not line or line.startswith('#'):
                continue
            records.append(json.loads(line))
    return records
