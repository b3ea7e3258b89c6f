# -*- mode:python; coding:utf-8; -*-
# created: 2026-10-17

"""
Bounded worker pool helpers.
"""

import logging
from concurrent.futures import ThreadPoolExecutor, as_completed

__all__ = ['ordered_map']


def ordered_map(function, items, max_workers=4, return_exceptions=False):
    """
    Applies a function to every item in a bounded thread pool and returns the
    results in the order of the items.

    Parameters
    ----------
    function : callable
        Function of a single argument.
    items : list
        Arguments.
    max_workers : int, optional
        Pool size.
    return_exceptions : bool, optional
        Put raised exceptions in place of results instead of re-raising the
        first one (in items order).

    Returns
    -------
    list
    """
    items = list(items)
    results = [None] * len(items)
    errors = {}
    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        futures = {
            executor.submit(function, item): index
            for index, item in enumerate(items)
        }
        for future in as_completed(futures):
            index = futures[future]
            try:
                results[index] = future.result()
            except Exception as e:
                logging.debug('task for %s failed: %s', items[index], e)
                errors[index] = e
    if errors:
        if not return_exceptions:
            raise errors[min(errors)]
        for index, error in errors.items():
            results[index] = error
    return results
