# -*- mode:python; coding:utf-8; -*-
# created: 2026-10-17

"""
Digests that tie result files to the configuration that produced them.
"""

import hashlib
import json

__all__ = ['get_hasher', 'canonical_json', 'hash_document']


def get_hasher(checksum_type):
    """
    Creates a hashlib object, "sha" is accepted as an alias of sha1.

    Parameters
    ----------
    checksum_type : str
        hashlib algorithm name.

    Returns
    -------
    _hashlib.HASH
    """
    if checksum_type == 'sha':
        checksum_type = 'sha1'
    return hashlib.new(checksum_type)


def canonical_json(document):
    """
    Serializes a document to its canonical JSON text: sorted keys, no
    insignificant whitespace, floats in their shortest repr.

    Parameters
    ----------
    document : dict
        JSON compatible document.

    Returns
    -------
    str
    """
    return json.dumps(document, sort_keys=True, separators=(',', ':'))


def hash_document(document, checksum_type='sha256'):
    """
    Returns a hex digest of the canonical JSON text of a document.

    Parameters
    ----------
    document : dict
        JSON compatible document.
    checksum_type : str, optional
        Checksum type, sha256 by default.

    Returns
    -------
    str
    """
    hasher = get_hasher(checksum_type)
    hasher.update(canonical_json(document).encode('utf-8'))
    return hasher.hexdigest()
