# -*- mode:python; coding:utf-8; -*-
# created: 2026-10-17

"""
Initial density families u0 on [0, h0].
"""

import math

import numpy as np

from climate_front.errors import ConfigurationError, PreconditionError

__all__ = ['InitialData', 'make_initial_bump', 'from_samples', 'FAMILIES']


def _cosine(x, h0):
    return np.cos(0.5 * math.pi * x / h0)


def _quadratic(x, h0):
    return 1.0 - (x / h0) ** 2


FAMILIES = {
    'cosine': _cosine,
    'quadratic': _quadratic,
}


class InitialData(object):

    """
    Sampled initial density on a uniform grid over [0, h0].

    Attributes
    ----------
    h0 : float
        Initial range length.
    values : numpy.ndarray
        Read-only density samples, values[0] at x = 0, values[-1] at x = h0.
    family : str or None
        Shape family name for analytic data, None for user samples.
    sigma : float or None
        Amplitude of analytic data.
    """

    def __init__(self, h0, values, family=None, sigma=None):
        values = np.array(values, dtype=float)
        if values.ndim != 1 or values.size < 3:
            raise PreconditionError(
                'initial data needs at least 3 samples on a 1-d grid'
            )
        values.setflags(write=False)
        self.h0 = float(h0)
        self.values = values
        self.family = family
        self.sigma = sigma

    @property
    def grid(self):
        return np.linspace(0.0, self.h0, self.values.size)

    @property
    def dx(self):
        return self.h0 / (self.values.size - 1)

    @property
    def sup_norm(self):
        return float(np.max(np.abs(self.values)))

    def evaluate(self, x):
        """
        Evaluates u0 at arbitrary points of [0, h0].

        Analytic families are evaluated exactly (u0(h0) is exactly zero),
        user samples are interpolated linearly.

        Parameters
        ----------
        x : numpy.ndarray
            Points of [0, h0].

        Returns
        -------
        numpy.ndarray
        """
        x = np.asarray(x, dtype=float)
        if self.family is not None:
            result = self.sigma * FAMILIES[self.family](x, self.h0)
            result = np.where(x >= self.h0, 0.0, result)
        else:
            result = np.interp(x, self.grid, self.values)
        return result

    def scaled(self, factor):
        """
        Returns the same shape multiplied by a positive factor.
        """
        sigma = None if self.sigma is None else self.sigma * factor
        return InitialData(
            self.h0, self.values * factor, family=self.family, sigma=sigma
        )

    def describe(self):
        return {
            'h0': self.h0,
            'family': self.family,
            'sigma': self.sigma,
            'points': int(self.values.size),
        }


def make_initial_bump(h0, sigma, shape='cosine', points=1025):
    """
    Builds the initial density sigma * phi(x) of a shape family.

    Parameters
    ----------
    h0 : float
        Initial range length.
    sigma : float
        Amplitude, must be positive.
    shape : str, optional
        Family name, "cosine" (sigma * cos(pi x / (2 h0))) or "quadratic"
        (sigma * (1 - (x / h0)^2)).
    points : int, optional
        Number of samples on [0, h0].

    Returns
    -------
    InitialData

    Raises
    ------
    climate_front.errors.PreconditionError
        If sigma or h0 isn't positive.
    climate_front.errors.ConfigurationError
        If the shape family is unknown.
    """
    if shape not in FAMILIES:
        raise ConfigurationError(
            f'unknown initial shape family "{shape}", '
            f'expected one of {", ".join(sorted(FAMILIES))}'
        )
    if not sigma > 0:
        raise PreconditionError(f'sigma must be positive, got {sigma}')
    if not h0 > 0:
        raise PreconditionError(f'h0 must be positive, got {h0}')
    x = np.linspace(0.0, h0, points)
    values = sigma * FAMILIES[shape](x, h0)
    values[-1] = 0.0
    return InitialData(h0, values, family=shape, sigma=sigma)


def from_samples(h0, values):
    """
    Wraps user sampled initial density given on a uniform grid over [0, h0].
    The data isn't validated here, see
    `climate_front.environment.validation.validate`.
    """
    return InitialData(h0, values)
