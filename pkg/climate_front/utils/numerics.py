# -*- mode:python; coding:utf-8; -*-
# created: 2026-10-17

"""
Finite difference helpers shared by the main solvers.
"""

import math

import numpy as np
from scipy.linalg import solve_banded

__all__ = [
    'tridiagonal_solve',
    'right_slope',
    'observed_order',
]


def tridiagonal_solve(lower, diag, upper, rhs):
    """
    Solves a tridiagonal linear system.

    Parameters
    ----------
    lower : numpy.ndarray
        Sub-diagonal, lower[i] multiplies x[i] in row i + 1 (length n - 1).
    diag : numpy.ndarray
        Main diagonal (length n).
    upper : numpy.ndarray
        Super-diagonal, upper[i] multiplies x[i + 1] in row i (length n - 1).
    rhs : numpy.ndarray
        Right hand side (length n).

    Returns
    -------
    numpy.ndarray
        Solution vector.
    """
    n = diag.size
    ab = np.zeros((3, n))
    ab[0, 1:] = upper
    ab[1, :] = diag
    ab[2, :-1] = lower
    return solve_banded((1, 1), ab, rhs, check_finite=False)


def right_slope(values, dx):
    """
    Second-order one-sided estimate of the derivative at the last grid point.

    Parameters
    ----------
    values : numpy.ndarray
        Samples on a uniform grid, at least 3 of them.
    dx : float
        Grid spacing.

    Returns
    -------
    float
    """
    return (3.0 * values[-1] - 4.0 * values[-2] + values[-3]) / (2.0 * dx)


def observed_order(errors, ratio=2.0):
    """
    Returns Richardson order estimates from a sequence of successive
    differences obtained with a constant refinement ratio.

    Parameters
    ----------
    errors : list of float
        Differences between consecutive resolution levels, coarse first.
    ratio : float, optional
        Refinement ratio between levels.

    Returns
    -------
    list of float
        One estimate per consecutive pair, NaN where a difference vanished.
    """
    orders = []
    for coarse, fine in zip(errors[:-1], errors[1:]):
        if coarse == 0.0 or fine == 0.0:
            orders.append(math.nan)
            continue
        orders.append(math.log(abs(coarse) / abs(fine)) / math.log(ratio))
    return orders
