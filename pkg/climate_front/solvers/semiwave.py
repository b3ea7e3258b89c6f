# -*- mode:python; coding:utf-8; -*-
# created: 2026-10-17

"""
Constant coefficient semi-waves q_c and the critical speed c0:

    d q'' + c q' + a q - b q^2 = 0 on (-inf, 0], q(0) = 0, q(-inf) = a/b,
    -mu(a) q_c0'(0) = c0.
"""

import logging
import math
import threading

import cachetools
import cachetools.keys
import numpy as np
from scipy.optimize import brentq

from climate_front.constants import (
    MAX_BISECTION_ITERATIONS,
    MONOTONE_SLACK,
    SPEED_BRACKET_MARGIN,
    SPEED_SCAN_SIZE,
)
from climate_front.environment.climate import eval_mu
from climate_front.errors import (
    BracketError,
    ConvergenceError,
    MonotonicityError,
    PreconditionError,
)
from climate_front.models import CriticalSpeed, SpeedSample
from climate_front.solvers.bvp import (
    derivative_at_right,
    left_truncation_radius,
    semiwave_spec,
    solve_logistic_bvp,
)
from climate_front.utils.pool import ordered_map

__all__ = [
    'SemiWave',
    'solve_semiwave',
    'semiwave_speed_function',
    'first_integral_slope',
    'solve_critical_speed',
    'critical_speed',
]

# extra scan points approaching 2 sqrt(ad) when f is still positive at the
# last regular scan speed
MAX_SCAN_EXTENSIONS = 10


class SemiWave(object):

    """
    Truncated semi-wave profile on [-X, 0].

    Attributes
    ----------
    c : float
        Wave speed.
    X : float
        Left truncation radius.
    slope0 : float
        Slope q_c'(0).
    profile : climate_front.solvers.bvp.Profile
        Underlying discrete solution.
    """

    def __init__(self, c, X, profile):
        self.c = float(c)
        self.X = float(X)
        self.profile = profile
        self.slope0 = derivative_at_right(profile)

    @property
    def grid(self):
        return self.profile.grid

    @property
    def values(self):
        return self.profile.values

    @property
    def residual(self):
        return self.profile.residual

    def is_decreasing(self, slack=MONOTONE_SLACK):
        return bool(np.all(np.diff(self.values) <= slack))

    def interpolate(self, x):
        """
        Evaluates the wave at arbitrary points, a/b-like left plateau value
        left of the grid and 0 right of it.
        """
        x = np.asarray(x, dtype=float)
        result = self.profile.interpolate(x)
        return np.where(x > self.grid[-1], 0.0, result)


def _check_speed(params, c):
    if not 0 < c < params.max_wave_speed:
        raise PreconditionError(
            f'semi-waves exist for 0 < c < 2 sqrt(ad) = '
            f'{params.max_wave_speed:g}, got c={c:g}'
        )


def solve_semiwave(
    c,
    params,
    tol=1e-9,
    X=None,
    dx=None,
    truncation_tol=1e-8,
    max_iterations=100,
):
    """
    Computes the semi-wave q_c on a truncated domain [-X, 0] with the
    Dirichlet value a/b at -X.

    Parameters
    ----------
    c : float
        Wave speed, 0 < c < 2 sqrt(ad).
    params : climate_front.models.ModelParams
        Problem constants (d, a and b are used).
    tol : float, optional
        Newton tolerance.
    X : float, optional
        Truncation radius, found by `left_truncation_radius` when omitted.
    dx : float, optional
        Grid spacing.
    truncation_tol : float, optional
        Slope tolerance of the truncation radius search.

    Returns
    -------
    SemiWave

    Raises
    ------
    climate_front.errors.PreconditionError
        If c is outside of (0, 2 sqrt(ad)).
    """
    _check_speed(params, c)
    if X is None:
        X = left_truncation_radius(
            params,
            c,
            truncation_tol,
            dx=dx,
            bvp_tol=tol,
            max_iterations=max_iterations,
        )
    profile = solve_logistic_bvp(
        semiwave_spec(params, c, X),
        dx=dx,
        tol=tol,
        max_iterations=max_iterations,
    )
    return SemiWave(c, X, profile)


def first_integral_slope(params):
    """
    Returns the c = 0 limit of q_c'(0), -(a/b) sqrt(a / (3d)), obtained from
    the first integral d q'^2 / 2 + a q^2 / 2 - b q^3 / 3 = a^3 / (6 b^2).
    """
    return -params.plateau * math.sqrt(params.a / (3.0 * params.d))


def semiwave_speed_function(params, mu, c, **kwargs):
    """
    Evaluates f(c) = -mu(a) q_c'(0) - c, whose unique root is c0.

    Parameters
    ----------
    params : climate_front.models.ModelParams
        Problem constants.
    mu : climate_front.models.ExpansionRate
        Expansion rate.
    c : float
        Wave speed.
    kwargs : dict
        `solve_semiwave` options.

    Returns
    -------
    float
    """
    wave = solve_semiwave(c, params, **kwargs)
    return -eval_mu(mu, params.a) * wave.slope0 - c


def _speed_key(
    params, mu_a, tol, dx, truncation_tol, bvp_tol, max_iterations, threads
):
    # c0 depends on d, a, b and mu(a) only
    return cachetools.keys.hashkey(
        params.d,
        params.a,
        params.b,
        mu_a,
        tol,
        dx,
        truncation_tol,
        bvp_tol,
        max_iterations,
    )


_SPEED_CACHE = cachetools.LRUCache(maxsize=64)
_SPEED_CACHE_LOCK = threading.RLock()


@cachetools.cached(_SPEED_CACHE, key=_speed_key, lock=_SPEED_CACHE_LOCK)
def _critical_speed(
    params, mu_a, tol, dx, truncation_tol, bvp_tol, max_iterations, threads
):
    c_max = params.max_wave_speed
    options = {'dx': dx, 'tol': bvp_tol, 'max_iterations': max_iterations}

    def sample(c):
        X = left_truncation_radius(
            params,
            c,
            truncation_tol,
            dx=dx,
            bvp_tol=bvp_tol,
            max_iterations=max_iterations,
        )
        wave = solve_semiwave(c, params, X=X, **options)
        return c, -mu_a * wave.slope0 - c, X

    speeds = [
        c_max * k / (SPEED_SCAN_SIZE + 1)
        for k in range(1, SPEED_SCAN_SIZE + 1)
    ]
    scan = ordered_map(sample, speeds, max_workers=threads)
    for (c1, f1, _), (c2, f2, _) in zip(scan[:-1], scan[1:]):
        if not f2 < f1:
            raise MonotonicityError(
                f'f(c) = -mu(a) q_c\'(0) - c is not decreasing: '
                f'f({c1:g})={f1:.6g}, f({c2:g})={f2:.6g}',
                pair=(c1, c2),
            )
    for extension in range(1, MAX_SCAN_EXTENSIONS + 1):
        if scan[-1][1] < 0:
            break
        c = c_max * (1.0 - 2.0 ** -extension / (SPEED_SCAN_SIZE + 1))
        scan.append(sample(c))
        if not scan[-1][1] < scan[-2][1]:
            raise MonotonicityError(
                'f(c) is not decreasing near 2 sqrt(ad)',
                pair=(scan[-2][0], scan[-1][0]),
            )
    table = [(c, value) for c, value, _ in scan]
    if scan[-1][1] >= 0:
        raise BracketError(
            'f(c) stays nonnegative up to 2 sqrt(ad)', table=table
        )
    if scan[0][1] <= 0:
        lower = sample(SPEED_BRACKET_MARGIN * c_max)
        table.insert(0, lower[:2])
        if lower[1] <= 0:
            raise BracketError(
                'f(c) is not positive at the lower end of the bracket',
                table=table,
            )
        scan.insert(0, lower)
    index = next(i for i, item in enumerate(scan) if item[1] < 0)
    c_lo, f_lo, _ = scan[index - 1]
    c_hi, _, X = scan[index]
    # the upper nominal end (1 - margin) 2 sqrt(ad) is never evaluated, f is
    # negative there because q_c'(0) vanishes as c approaches 2 sqrt(ad)
    logging.debug(
        'c0 bracket [%g, %g] from the pre-flight scan, X=%g', c_lo, c_hi, X
    )
    if f_lo == 0.0:
        return CriticalSpeed(
            c0=c_lo,
            residual=0.0,
            truncation_radius=X,
            iterations=0,
            scan=[SpeedSample(c=c, value=value) for c, value in table],
        )

    def f(c):
        wave = solve_semiwave(c, params, X=X, **options)
        return -mu_a * wave.slope0 - c

    try:
        c0, result = brentq(
            f,
            c_lo,
            c_hi,
            xtol=1e-15 * c_max,
            maxiter=MAX_BISECTION_ITERATIONS,
            full_output=True,
            disp=False,
        )
    except ValueError as e:
        raise BracketError(str(e), table=table)
    residual = abs(f(c0))
    if not result.converged or residual > tol:
        raise ConvergenceError(
            f'critical speed search stopped at c={c0:.12g} with '
            f'|f(c)|={residual:.3e}',
            result.iterations,
            residual,
        )
    logging.info(
        'critical speed c0=%.12g, |f(c0)|=%.3e, X=%g, %d iterations',
        c0,
        residual,
        X,
        result.iterations,
    )
    return CriticalSpeed(
        c0=c0,
        residual=residual,
        truncation_radius=X,
        iterations=result.iterations,
        scan=[SpeedSample(c=c, value=value) for c, value in table],
    )


def solve_critical_speed(
    params,
    mu,
    tol=1e-9,
    dx=None,
    truncation_tol=1e-8,
    bvp_tol=1e-9,
    max_iterations=100,
    threads=4,
):
    """
    Finds the critical speed c0, the root of f(c) = -mu(a) q_c'(0) - c in
    (0, 2 sqrt(ad)).

    A pre-flight scan over 8 speeds asserts that f is decreasing and
    locates the sign change, Brent's method then refines the root with the
    truncation radius of the upper scan speed. Results are memoised per
    (d, a, b, mu(a)) and numeric settings.

    Parameters
    ----------
    params : climate_front.models.ModelParams
        Problem constants.
    mu : climate_front.models.ExpansionRate
        Expansion rate.
    tol : float, optional
        Certificate tolerance on |f(c0)|.
    dx : float, optional
        Semi-wave grid spacing.
    truncation_tol : float, optional
        Truncation radius slope tolerance.
    bvp_tol : float, optional
        Newton tolerance.
    threads : int, optional
        Pre-flight scan pool size.

    Returns
    -------
    climate_front.models.CriticalSpeed

    Raises
    ------
    climate_front.errors.MonotonicityError
        If the scan finds f not decreasing.
    climate_front.errors.BracketError
        If the scan finds no sign change.
    climate_front.errors.ConvergenceError
        If the root doesn't satisfy the certificate.
    """
    if not params.relaxed and not params.a0 < 0:
        logging.warning(
            'critical speed requested for a0=%g >= 0 outside relaxed mode',
            params.a0,
        )
    mu_a = eval_mu(mu, params.a)
    result = _critical_speed(
        params,
        mu_a,
        tol,
        dx,
        truncation_tol,
        bvp_tol,
        max_iterations,
        threads,
    )
    return result.model_copy(deep=True)


def critical_speed(params, mu, tol=1e-9, **kwargs):
    """
    Returns the critical speed c0, see `solve_critical_speed`.

    Returns
    -------
    float
    """
    return solve_critical_speed(params, mu, tol=tol, **kwargs).c0
