# -*- mode:python; coding:utf-8; -*-
# created: 2026-10-17

"""
Climate profile A(xi) and expansion rate mu(zeta) of the free boundary
problem.
"""

import logging
import math

import numpy as np

from climate_front.models import ClimateProfile, ExpansionRate, ModelParams

__all__ = [
    'make_climate',
    'make_expansion_rate',
    'eval_climate',
    'eval_mu',
    'lipschitz_constant',
    'critical_length',
    'homogeneous_counterpart',
]


# relative slack below which out-of-range mu arguments are rounding noise
_CLAMP_SLACK = 1e-12


def make_climate(params, kind='linear'):
    """
    Builds the climate profile of a problem instance.

    Parameters
    ----------
    params : climate_front.models.ModelParams
        Problem constants.
    kind : str, optional
        Transition zone interpolation, "linear" or "cubic".

    Returns
    -------
    climate_front.models.ClimateProfile
    """
    return ClimateProfile(a=params.a, a0=params.a0, l0=params.l0, kind=kind)


def make_expansion_rate(params, mu0=1.0, slope=0.0, kind='affine'):
    """
    Builds the affine expansion rate mu(zeta) = mu0 + slope * (zeta - a0).
    """
    return ExpansionRate(
        a0=params.a0, a=params.a, mu0=mu0, slope=slope, kind=kind
    )


def eval_climate(profile, xi):
    """
    Evaluates the climate profile A(xi).

    A equals a for xi <= 0, a0 for xi >= l0 and is monotone in between.

    Parameters
    ----------
    profile : climate_front.models.ClimateProfile
        Climate profile.
    xi : float or numpy.ndarray
        Position(s) relative to the shifting climate boundary.

    Returns
    -------
    float or numpy.ndarray
        Growth rate(s), a float for scalar input.
    """
    z = np.clip(np.asarray(xi, dtype=float) / profile.l0, 0.0, 1.0)
    if profile.kind == 'cubic':
        weight = z * z * (3.0 - 2.0 * z)
    else:
        weight = z
    value = profile.a + (profile.a0 - profile.a) * weight
    if np.ndim(value) == 0:
        return float(value)
    return value


def lipschitz_constant(profile):
    """
    Returns the Lipschitz constant of the climate profile on the whole line.

    Parameters
    ----------
    profile : climate_front.models.ClimateProfile
        Climate profile.

    Returns
    -------
    float
    """
    jump = abs(profile.a - profile.a0) / profile.l0
    if profile.kind == 'cubic':
        # max of d/dz (3z^2 - 2z^3) is 3/2 at z = 1/2
        return 1.5 * jump
    return jump


def eval_mu(mu, zeta):
    """
    Evaluates the expansion rate mu(zeta).

    Arguments outside of [a0, a] are clamped to the nearest end and a warning
    is logged.

    Parameters
    ----------
    mu : climate_front.models.ExpansionRate
        Expansion rate.
    zeta : float or numpy.ndarray
        Growth rate(s).

    Returns
    -------
    float or numpy.ndarray
    """
    lo, hi = min(mu.a0, mu.a), max(mu.a0, mu.a)
    zeta = np.asarray(zeta, dtype=float)
    slack = _CLAMP_SLACK * max(1.0, abs(lo), abs(hi))
    if np.any(zeta < lo - slack) or np.any(zeta > hi + slack):
        logging.warning(
            'expansion rate argument %s is outside of [%g, %g], clamping',
            zeta,
            lo,
            hi,
        )
    value = mu.mu0 + mu.slope * (np.clip(zeta, lo, hi) - mu.a0)
    if np.ndim(value) == 0:
        return float(value)
    return value


def critical_length(params):
    """
    Returns the critical range length pi/2 * sqrt(d/a) beyond which a
    population can't vanish.

    Parameters
    ----------
    params : climate_front.models.ModelParams
        Problem constants.

    Returns
    -------
    float
    """
    return 0.5 * math.pi * math.sqrt(params.d / params.a)


def homogeneous_counterpart(params, mu):
    """
    Builds the homogeneous comparison problem with A = a everywhere and a
    constant expansion rate mu(a). Its solution bounds the original one from
    above.

    Parameters
    ----------
    params : climate_front.models.ModelParams
        Problem constants.
    mu : climate_front.models.ExpansionRate
        Expansion rate of the original problem.

    Returns
    -------
    tuple
        Relaxed ModelParams, ClimateProfile and ExpansionRate.
    """
    homogeneous = ModelParams(
        **params.model_dump(exclude={'a0', 'relaxed'}),
        a0=params.a,
        relaxed=True,
    )
    profile = make_climate(homogeneous)
    rate = make_expansion_rate(homogeneous, mu0=eval_mu(mu, params.a))
    return homogeneous, profile, rate
