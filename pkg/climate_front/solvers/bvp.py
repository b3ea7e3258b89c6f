# -*- mode:python; coding:utf-8; -*-
# created: 2026-10-17

"""
Newton relaxation solver for logistic two-point boundary value problems

    -d v'' - c v' = kappa(x) v - b v^2,  xl < x < xr,
    v(xl) = left_value, v(xr) = right_value.
"""

import logging
import math

import numpy as np

from climate_front.constants import (
    DEFAULT_DX_SCALE,
    TRIVIAL_BRANCH_RTOL,
    TRUNCATION_MAX_DOUBLINGS,
    TRUNCATION_START,
)
from climate_front.environment.climate import eval_climate, eval_mu
from climate_front.errors import (
    ConvergenceError,
    PreconditionError,
    TrivialBranchError,
    TruncationError,
)
from climate_front.models import BvpSpec
from climate_front.utils.file_utils import write_table
from climate_front.utils.hashing import hash_document
from climate_front.utils.numerics import right_slope, tridiagonal_solve

__all__ = [
    'Profile',
    'solve_logistic_bvp',
    'derivative_at_right',
    'left_truncation_radius',
    'semiwave_spec',
    'logistic_upper_bound',
    'psi_spec',
    'w_spec',
    'u_spec',
    'auxiliary_front_speeds',
]

MIN_GRID_SIZE = 16
# smallest accepted damping factor, steps below it are forced
MIN_DAMPING = 1e-4


class Profile(object):

    """
    Discrete solution of a boundary value problem.

    Attributes
    ----------
    grid : numpy.ndarray
        Strictly increasing abscissae, read-only.
    values : numpy.ndarray
        Densities, read-only.
    metadata : dict
        spec_hash, iterations, residual and branch ("positive" or "trivial").
    """

    def __init__(self, grid, values, metadata=None):
        grid = np.array(grid, dtype=float)
        values = np.array(values, dtype=float)
        grid.setflags(write=False)
        values.setflags(write=False)
        self.grid = grid
        self.values = values
        self.metadata = dict(metadata or {})

    @property
    def dx(self):
        return float(self.grid[1] - self.grid[0])

    @property
    def residual(self):
        return self.metadata.get('residual', math.nan)

    @property
    def iterations(self):
        return self.metadata.get('iterations', 0)

    @property
    def branch(self):
        return self.metadata.get('branch', 'positive')

    def interpolate(self, x, left=None):
        """
        Linear interpolation of the profile.

        Parameters
        ----------
        x : numpy.ndarray
            Evaluation points.
        left : float, optional
            Value used left of the grid, the first value by default. Points
            right of the grid get the last value.

        Returns
        -------
        numpy.ndarray
        """
        return np.interp(x, self.grid, self.values, left=left)

    def to_csv(self, file_path, header=None):
        """
        Writes the profile as a two-column (x, v) CSV file with a comment
        header carrying the problem hash and residual.
        """
        meta = dict(self.metadata)
        meta.update(header or {})
        write_table(
            file_path,
            ['x', 'v'],
            np.column_stack([self.grid, self.values]),
            header=meta,
        )


def _make_grid(spec, n, dx):
    if dx is not None:
        # right end is exact so that grids of different problems line up
        span = int(math.ceil((spec.xr - spec.xl) / dx - 1e-9))
        n = max(MIN_GRID_SIZE, span + 1)
        return spec.xr - dx * np.arange(n - 1, -1, -1, dtype=float)
    if n is None or n < MIN_GRID_SIZE:
        raise PreconditionError(
            f'grid size must be at least {MIN_GRID_SIZE}, got {n}'
        )
    return np.linspace(spec.xl, spec.xr, n)


def coefficient_values(spec, x):
    """
    Evaluates the growth coefficient kappa of a problem on a grid.
    """
    if spec.kappa is not None:
        return np.full(x.shape, float(spec.kappa))
    return eval_climate(spec.climate, x)


def _residual(v, kappa, spec, h):
    inner = v[1:-1]
    second = (v[2:] - 2.0 * inner + v[:-2]) / (h * h)
    first = (v[2:] - v[:-2]) / (2.0 * h)
    return (
        -spec.d * second
        - spec.drift * first
        - kappa[1:-1] * inner
        + spec.b * inner * inner
    )


def _initial_iterate(x, kappa, spec):
    guess = np.interp(
        x, [x[0], x[-1]], [spec.left_value, spec.right_value]
    )
    kappa_max = float(np.max(kappa))
    if kappa_max > 0:
        width = math.sqrt(spec.d / kappa_max)
        bump = (
            kappa_max
            / spec.b
            * np.tanh((x - x[0]) / width)
            * np.tanh((x[-1] - x) / width)
        )
        guess = np.maximum(guess, bump)
    guess[0] = spec.left_value
    guess[-1] = spec.right_value
    return guess


def _roundoff_floor(kappa, spec, h, scale):
    # residual of the exact discrete solution rounded to double precision
    operator = (
        4.0 * spec.d / h ** 2
        + abs(spec.drift) / h
        + float(np.max(np.abs(kappa)))
        + 2.0 * spec.b * scale
    )
    return 16.0 * np.finfo(float).eps * scale * operator


def solve_logistic_bvp(
    spec, n=None, tol=1e-9, dx=None, max_iterations=100, allow_trivial=False
):
    """
    Solves a logistic boundary value problem by damped Newton iteration on
    the centered second-order discretization.

    The positive branch is sought first, starting from a positive initial
    iterate. Each Newton step is shrunk by a factor of 3 until the iterate
    stays nonnegative and the residual doesn't grow.

    Parameters
    ----------
    spec : climate_front.models.BvpSpec
        Problem definition.
    n : int, optional
        Grid size, at least 16. Ignored if `dx` is given.
    tol : float, optional
        Tolerance on the discrete residual and on the relative Newton step.
    dx : float, optional
        Grid spacing. The grid then ends exactly at spec.xr and starts at the
        first multiple of dx at or left of spec.xl.
    max_iterations : int, optional
        Newton iterations limit.
    allow_trivial : bool, optional
        Return the zero solution flagged as "trivial" branch instead of
        raising when Newton lands on it.

    Returns
    -------
    Profile

    Raises
    ------
    climate_front.errors.ConvergenceError
        If Newton doesn't converge in `max_iterations` iterations.
    climate_front.errors.TrivialBranchError
        If only the zero solution was found and `allow_trivial` is False.
    """
    x = _make_grid(spec, n, dx)
    h = float(x[1] - x[0])
    kappa = coefficient_values(spec, x)
    v = _initial_iterate(x, kappa, spec)
    scale = max(1.0, spec.left_value, spec.right_value)
    lower = np.full(x.size - 3, -spec.d / h ** 2 + spec.drift / (2.0 * h))
    upper = np.full(x.size - 3, -spec.d / h ** 2 - spec.drift / (2.0 * h))
    residual = _residual(v, kappa, spec, h)
    norm = float(np.max(np.abs(residual)))
    converged = norm == 0.0
    iterations = 0
    while not converged and iterations < max_iterations:
        iterations += 1
        diag = 2.0 * spec.d / h ** 2 - kappa[1:-1] + 2.0 * spec.b * v[1:-1]
        delta = tridiagonal_solve(lower, diag, upper, residual)
        if not np.all(np.isfinite(delta)):
            raise ConvergenceError(
                'Newton step is not finite', iterations, norm
            )
        damping = 1.0
        full_step = float(np.max(np.abs(delta)))
        while True:
            candidate = v.copy()
            candidate[1:-1] -= damping * delta
            trial = _residual(candidate, kappa, spec, h)
            trial_norm = float(np.max(np.abs(trial)))
            # steps below tolerance are accepted at the round-off floor
            small = damping * full_step <= tol * scale
            if np.min(candidate) >= -tol * scale and (
                trial_norm <= norm or small
            ):
                break
            if damping < MIN_DAMPING:
                np.maximum(candidate, 0.0, out=candidate)
                trial = _residual(candidate, kappa, spec, h)
                trial_norm = float(np.max(np.abs(trial)))
                break
            damping /= 3.0
        step = damping * full_step
        v, residual, norm = candidate, trial, trial_norm
        logging.debug(
            'Newton iteration %d: residual %.3e, step %.3e, damping %.3g',
            iterations,
            norm,
            step,
            damping,
        )
        converged = norm == 0.0 or (damping == 1.0 and step <= tol * scale)
    if not converged:
        raise ConvergenceError(
            f'Newton iteration did not converge in {iterations} iterations, '
            f'last residual {norm:.3e}',
            iterations,
            norm,
        )
    floor = _roundoff_floor(kappa, spec, h, scale)
    if norm > max(tol, floor):
        raise ConvergenceError(
            f'Newton steps stalled with residual {norm:.3e} above the '
            f'tolerance {tol:.3e}',
            iterations,
            norm,
        )
    v = np.maximum(v, 0.0)
    branch = 'positive'
    if spec.left_value == 0 and spec.right_value == 0:
        kappa_max = max(float(np.max(kappa)), 0.0)
        level = max(kappa_max / spec.b, 1.0)
        if float(np.max(v)) <= TRIVIAL_BRANCH_RTOL * level:
            branch = 'trivial'
            v = np.zeros_like(v)
            if not allow_trivial:
                raise TrivialBranchError(
                    f'only the zero solution exists on [{x[0]:g}, {x[-1]:g}]'
                )
    metadata = {
        'spec_hash': hash_document(spec.model_dump(mode='json')),
        'iterations': iterations,
        'residual': norm,
        'branch': branch,
    }
    return Profile(x, v, metadata)


def derivative_at_right(profile):
    """
    Returns the second-order one-sided estimate of v'(xr).

    Parameters
    ----------
    profile : Profile
        Computed profile.

    Returns
    -------
    float

    Raises
    ------
    climate_front.errors.PreconditionError
        If the profile has less than 4 points.
    """
    if profile.values.size < 4:
        raise PreconditionError(
            'slope extraction needs at least 4 grid points'
        )
    return float(right_slope(profile.values, profile.dx))


def semiwave_spec(params, c, X):
    """
    Truncated constant-coefficient semi-wave problem on [-X, 0]: kappa = a,
    v(-X) = a/b, v(0) = 0.
    """
    return BvpSpec(
        xl=-X,
        xr=0.0,
        left_value=params.plateau,
        right_value=0.0,
        drift=c,
        d=params.d,
        b=params.b,
        kappa=params.a,
    )


def _default_dx(params):
    return DEFAULT_DX_SCALE * math.sqrt(params.d / params.a)


def left_truncation_radius(
    params, c, tol, dx=None, bvp_tol=1e-9, max_iterations=100
):
    """
    Finds a left truncation radius X of the semi-wave problem such that
    doubling X changes the slope at the free end by less than `tol`.

    X starts at 20 * sqrt(d/a) and doubles until the criterion holds. The
    same grid spacing is used on both radii.

    Parameters
    ----------
    params : climate_front.models.ModelParams
        Problem constants (d, a and b are used).
    c : float
        Wave speed, positive.
    tol : float
        Slope change tolerance.
    dx : float, optional
        Grid spacing, 2e-3 * sqrt(d/a) by default.

    Returns
    -------
    float

    Raises
    ------
    climate_front.errors.TruncationError
        If X exceeds the doubling cap.
    """
    if not c > 0:
        raise PreconditionError(f'wave speed must be positive, got {c}')
    if not tol > 0:
        raise PreconditionError(f'tolerance must be positive, got {tol}')
    dx = dx or _default_dx(params)
    radius = TRUNCATION_START * math.sqrt(params.d / params.a)

    def slope(X):
        profile = solve_logistic_bvp(
            semiwave_spec(params, c, X),
            dx=dx,
            tol=bvp_tol,
            max_iterations=max_iterations,
        )
        return derivative_at_right(profile)

    current = slope(radius)
    for _ in range(TRUNCATION_MAX_DOUBLINGS):
        doubled = slope(2.0 * radius)
        change = abs(doubled - current)
        logging.debug(
            'truncation radius %g: slope change %.3e', radius, change
        )
        if change < tol:
            logging.info(
                'semi-wave truncation radius for c=%g: %g', c, radius
            )
            return radius
        radius *= 2.0
        current = doubled
    raise TruncationError(
        f'truncation radius exceeded {radius:g} for c={c:g} without '
        f'reaching slope tolerance {tol:g}'
    )


def logistic_upper_bound(params, u0):
    """
    Returns M = max(a/b, sup u0), a supersolution level of every truncated
    problem.
    """
    return max(params.plateau, u0.sup_norm)


def psi_spec(params, profile, l, L1, M):
    """
    Left-loaded problem on [-l, L1]: kappa = A(x), v(-l) = M, v(L1) = 0.
    """
    return BvpSpec(
        xl=-l,
        xr=L1,
        left_value=M,
        right_value=0.0,
        drift=params.c,
        d=params.d,
        b=params.b,
        climate=profile,
    )


def w_spec(params, profile, l, L):
    """
    Zero boundary data problem on [-l, L] with kappa = A(x).
    """
    return BvpSpec(
        xl=-l,
        xr=L,
        left_value=0.0,
        right_value=0.0,
        drift=params.c,
        d=params.d,
        b=params.b,
        climate=profile,
    )


def u_spec(params, l):
    """
    Zero boundary data problem on [-l, 0] with kappa = a.
    """
    return BvpSpec(
        xl=-l,
        xr=0.0,
        left_value=0.0,
        right_value=0.0,
        drift=params.c,
        d=params.d,
        b=params.b,
        kappa=params.a,
    )


def auxiliary_front_speeds(
    params, profile, mu, L0, l, M=None, L1=None, L2=None, dx=None, tol=1e-9
):
    """
    Computes the front speeds -mu(A(L)) v'(L) of the two truncated barrier
    problems bounding h(t) - ct: the left-loaded problem at L1 > L0 (speed
    below c for large l) and the zero data problem at 0 < L2 < L0 (speed
    above c for large l).

    Parameters
    ----------
    params : climate_front.models.ModelParams
        Problem constants.
    profile : climate_front.models.ClimateProfile
        Climate profile.
    mu : climate_front.models.ExpansionRate
        Expansion rate.
    L0 : float
        Critical shift.
    l : float
        Left truncation length.
    M : float, optional
        Left value of the left-loaded problem, a/b by default.
    L1 : float, optional
        Right end of the left-loaded problem, L0 + l0/2 by default.
    L2 : float, optional
        Right end of the zero data problem, L0/2 by default.

    Returns
    -------
    dict
        {"upper": (L1, speed), "lower": (L2, speed) or None when L0 = 0}.
    """
    dx = dx or _default_dx(params)
    M = params.plateau if M is None else M
    L1 = L0 + 0.5 * params.l0 if L1 is None else L1
    psi = solve_logistic_bvp(
        psi_spec(params, profile, l, L1, M), dx=dx, tol=tol
    )
    rate = eval_mu(mu, eval_climate(profile, L1))
    upper = -rate * derivative_at_right(psi)
    result = {'upper': (L1, upper), 'lower': None}
    if L2 is None and L0 > 0:
        L2 = 0.5 * L0
    if L2 is not None:
        w = solve_logistic_bvp(
            w_spec(params, profile, l, L2), dx=dx, tol=tol
        )
        rate = eval_mu(mu, eval_climate(profile, L2))
        lower = -rate * derivative_at_right(w)
        result['lower'] = (L2, lower)
    return result
