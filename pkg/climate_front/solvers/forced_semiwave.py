# -*- mode:python; coding:utf-8; -*-
# created: 2026-10-17

"""
Forced semi-waves of the shifting climate problem

    -d v'' - c v' = A(x) v - b v^2 on (-inf, L], v(-inf) = a/b, v(L) = 0,

and the critical shift L0 solving -mu(A(L0)) v_L0'(L0) = c.
"""

import logging

import numpy as np
from scipy.optimize import brentq

from climate_front.constants import (
    CRITICAL_SPEED_MATCH,
    MAX_BISECTION_ITERATIONS,
    MONOTONE_SLACK,
)
from climate_front.environment.climate import eval_climate, eval_mu
from climate_front.errors import (
    BracketError,
    ConvergenceError,
    MonotonicityError,
    PreconditionError,
)
from climate_front.models import (
    BvpSpec,
    CriticalShift,
    ShiftSample,
    SlopeScanReport,
    SlopeScanRow,
)
from climate_front.solvers.bvp import (
    derivative_at_right,
    left_truncation_radius,
    solve_logistic_bvp,
)
from climate_front.solvers.semiwave import critical_speed
from climate_front.utils.pool import ordered_map

__all__ = [
    'ForcedWave',
    'solve_forced_semiwave',
    'slope_at_L',
    'solve_critical_shift',
    'find_L0',
    'slope_monotonicity_scan',
]

# slopes at shifts L <= 0 agree up to this relative difference
SHIFT_IDENTITY_RTOL = 1e-8
MAX_SHIFT_DOUBLINGS = 12


class ForcedWave(object):

    """
    Forced semi-wave v_L on [min(L, 0) - X, L].

    Attributes
    ----------
    L : float
        Shift, the right end of the profile.
    X : float
        Left truncation radius measured from min(L, 0).
    profile : climate_front.solvers.bvp.Profile
        Underlying discrete solution.
    slopeL : float
        Slope v_L'(L).
    """

    def __init__(self, L, X, profile):
        self.L = float(L)
        self.X = float(X)
        self.profile = profile
        self.slopeL = derivative_at_right(profile)

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
        x = np.asarray(x, dtype=float)
        result = self.profile.interpolate(x)
        return np.where(x > self.grid[-1], 0.0, result)


def forced_spec(params, profile, c, L, X):
    return BvpSpec(
        xl=min(L, 0.0) - X,
        xr=L,
        left_value=params.plateau,
        right_value=0.0,
        drift=c,
        d=params.d,
        b=params.b,
        climate=profile,
    )


def _resolve_c0(params, c, mu, c0, **speed_options):
    if not c > 0:
        raise PreconditionError(f'climate speed must be positive, got {c}')
    if c0 is None:
        if mu is None:
            raise PreconditionError(
                'either c0 or the expansion rate is required to check c <= c0'
            )
        c0 = critical_speed(params, mu, **speed_options)
    if c > c0 * (1.0 + CRITICAL_SPEED_MATCH):
        raise PreconditionError(
            f'forced semi-waves exist only for 0 < c <= c0, got c={c:.12g} > '
            f'c0={c0:.12g}'
        )
    return c0


def solve_forced_semiwave(
    L,
    params,
    profile,
    c,
    tol=1e-9,
    mu=None,
    c0=None,
    X=None,
    dx=None,
    truncation_tol=1e-8,
    max_iterations=100,
):
    """
    Solves the forced semi-wave problem on a truncated domain.

    The coefficient is A(x) in the frame fixed to the climate boundary, no
    re-shift is applied. The domain is [min(L, 0) - X, L] with v = a/b at its
    left end, so for L < 0 the problem is the L = 0 one moved by L.

    Parameters
    ----------
    L : float
        Shift.
    params : climate_front.models.ModelParams
        Problem constants.
    profile : climate_front.models.ClimateProfile
        Climate profile.
    c : float
        Climate speed, 0 < c <= c0.
    tol : float, optional
        Newton tolerance.
    mu : climate_front.models.ExpansionRate, optional
        Expansion rate, used to compute c0 when it isn't given.
    c0 : float, optional
        Critical speed.
    X : float, optional
        Truncation radius, `left_truncation_radius` of speed c by default.
    dx : float, optional
        Grid spacing.

    Returns
    -------
    ForcedWave

    Raises
    ------
    climate_front.errors.PreconditionError
        If c > c0.
    """
    _resolve_c0(
        params, c, mu, c0, dx=dx, truncation_tol=truncation_tol, bvp_tol=tol
    )
    if X is None:
        X = left_truncation_radius(
            params,
            c,
            truncation_tol,
            dx=dx,
            bvp_tol=tol,
            max_iterations=max_iterations,
        )
    solution = solve_logistic_bvp(
        forced_spec(params, profile, c, L, X),
        dx=dx,
        tol=tol,
        max_iterations=max_iterations,
    )
    return ForcedWave(L, X, solution)


def slope_at_L(L, params, profile, c, **kwargs):
    """
    Returns v_L'(L).

    Parameters
    ----------
    L : float
        Shift.
    params : climate_front.models.ModelParams
        Problem constants.
    profile : climate_front.models.ClimateProfile
        Climate profile.
    c : float
        Climate speed.
    kwargs : dict
        `solve_forced_semiwave` options.

    Returns
    -------
    float
    """
    return solve_forced_semiwave(L, params, profile, c, **kwargs).slopeL


def solve_critical_shift(
    params,
    profile,
    mu,
    c,
    tol=1e-8,
    c0=None,
    dx=None,
    bvp_tol=1e-9,
    truncation_tol=1e-8,
    max_iterations=100,
):
    """
    Finds the critical shift L0 >= 0, the root of
    g(L) = -mu(A(L)) v_L'(L) - c.

    The bracket is [0, L_hi] where L_hi doubles from l0 until g(L_hi) < 0,
    g must decrease along the doubling ladder. For c = c0 (within 1e-8
    relative) L0 = 0 is returned directly.

    Parameters
    ----------
    params : climate_front.models.ModelParams
        Problem constants.
    profile : climate_front.models.ClimateProfile
        Climate profile.
    mu : climate_front.models.ExpansionRate
        Expansion rate.
    c : float
        Climate speed, 0 < c <= c0.
    tol : float, optional
        Certificate tolerance on |g(L0)|.
    c0 : float, optional
        Critical speed, computed when omitted.

    Returns
    -------
    climate_front.models.CriticalShift

    Raises
    ------
    climate_front.errors.PreconditionError
        If c > c0.
    climate_front.errors.BracketError
        If no negative g is found along the ladder, the error carries the
        evaluated (L, g(L)) table.
    climate_front.errors.MonotonicityError
        If g isn't decreasing on the ladder.
    """
    c0 = _resolve_c0(
        params,
        c,
        mu,
        c0,
        dx=dx,
        truncation_tol=truncation_tol,
        bvp_tol=bvp_tol,
    )
    X = left_truncation_radius(
        params,
        c,
        truncation_tol,
        dx=dx,
        bvp_tol=bvp_tol,
        max_iterations=max_iterations,
    )
    if abs(c - c0) <= CRITICAL_SPEED_MATCH * c0:
        logging.info('c=%.12g matches c0, L0=0', c)
        return CriticalShift(
            L0=0.0,
            residual=0.0,
            c=c,
            c0=c0,
            truncation_radius=X,
            iterations=0,
        )

    def g(L):
        wave = solve_forced_semiwave(
            L,
            params,
            profile,
            c,
            tol=bvp_tol,
            c0=c0,
            X=X,
            dx=dx,
            max_iterations=max_iterations,
        )
        rate = eval_mu(mu, eval_climate(profile, L))
        return -rate * wave.slopeL - c

    table = [(0.0, g(0.0))]
    if not table[0][1] > 0:
        raise BracketError(
            f'g(0) must be positive for c < c0, got {table[0][1]:.6g}',
            table=table,
        )
    L_hi = params.l0
    for _ in range(MAX_SHIFT_DOUBLINGS):
        table.append((L_hi, g(L_hi)))
        if not table[-1][1] < table[-2][1]:
            raise MonotonicityError(
                f'g(L) is not decreasing between L={table[-2][0]:g} and '
                f'L={L_hi:g}',
                pair=(table[-2][0], L_hi),
            )
        logging.debug('g(%g) = %.6g', L_hi, table[-1][1])
        if table[-1][1] < 0:
            break
        L_hi *= 2.0
    else:
        raise BracketError(
            f'g(L) stays nonnegative up to L={L_hi:g}', table=table
        )
    L_lo = table[-2][0]
    if table[-2][1] == 0.0:
        L0, iterations = L_lo, 0
    else:
        L0, result = brentq(
            g,
            L_lo,
            L_hi,
            xtol=1e-14 * max(1.0, L_hi),
            maxiter=MAX_BISECTION_ITERATIONS,
            full_output=True,
            disp=False,
        )
        iterations = result.iterations
    residual = abs(g(L0))
    if residual > tol:
        raise ConvergenceError(
            f'critical shift search stopped at L={L0:.12g} with '
            f'|g(L)|={residual:.3e}',
            iterations,
            residual,
        )
    logging.info(
        'critical shift L0=%.12g for c=%.12g (c0=%.12g), |g(L0)|=%.3e',
        L0,
        c,
        c0,
        residual,
    )
    return CriticalShift(
        L0=L0,
        residual=residual,
        c=c,
        c0=c0,
        truncation_radius=X,
        iterations=iterations,
        scan=[ShiftSample(L=L, value=value) for L, value in table],
    )


def find_L0(params, profile, mu, c, tol=1e-8, **kwargs):
    """
    Returns the critical shift L0, see `solve_critical_shift`.

    Returns
    -------
    float
    """
    return solve_critical_shift(params, profile, mu, c, tol=tol, **kwargs).L0


def slope_monotonicity_scan(L_list, params, profile, c, threads=4, **kwargs):
    """
    Computes v_L'(L) over a sorted list of shifts and checks that slopes
    strictly increase between shifts in [0, inf) and coincide between
    shifts <= 0.

    Parameters
    ----------
    L_list : list of float
        Sorted shifts, at least 2 of them.
    params : climate_front.models.ModelParams
        Problem constants.
    profile : climate_front.models.ClimateProfile
        Climate profile.
    c : float
        Climate speed.
    threads : int, optional
        Pool size.
    kwargs : dict
        `solve_forced_semiwave` options.

    Returns
    -------
    climate_front.models.SlopeScanReport
        Table of slopes, failed report with the offending pair on violation.
    """
    L_list = [float(L) for L in L_list]
    if len(L_list) < 2 or L_list != sorted(L_list):
        raise PreconditionError('L_list must be sorted with >= 2 entries')
    if kwargs.get('X') is None:
        kwargs['X'] = left_truncation_radius(
            params,
            c,
            kwargs.get('truncation_tol', 1e-8),
            dx=kwargs.get('dx'),
            bvp_tol=kwargs.get('tol', 1e-9),
        )
    slopes = ordered_map(
        lambda L: slope_at_L(L, params, profile, c, **kwargs),
        L_list,
        max_workers=threads,
    )
    rows = [SlopeScanRow(L=L, slope=s) for L, s in zip(L_list, slopes)]
    for first, second in zip(rows[:-1], rows[1:]):
        if second.L <= 0:
            scale = max(1.0, abs(first.slope))
            if abs(second.slope - first.slope) > SHIFT_IDENTITY_RTOL * scale:
                return SlopeScanReport(
                    rows=rows,
                    passed=False,
                    offending_pair=(first.L, second.L),
                    message='slopes differ between shifts <= 0',
                )
        elif not second.slope > first.slope:
            return SlopeScanReport(
                rows=rows,
                passed=False,
                offending_pair=(first.L, second.L),
                message='slopes are not strictly increasing',
            )
    return SlopeScanReport(rows=rows, passed=True)
