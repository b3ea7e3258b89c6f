# -*- mode:python; coding:utf-8; -*-
# created: 2026-10-17

"""
Slow independent reference solvers used to cross-check the production
solvers.

Nothing here touches the finite difference code of `climate_front.solvers`
or `climate_front.utils.numerics`: the time dependent oracle is an explicit
Euler integration on a refined front-fixed mesh with a third-order front
slope stencil, the boundary value oracle is adaptive Runge-Kutta shooting.
Only plain result containers are imported from the solver package.
"""

import logging
import math

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from climate_front.constants import ORACLE_MAX_HALVINGS, ORACLE_REFINEMENT
from climate_front.environment.climate import eval_climate, eval_mu
from climate_front.errors import (
    BracketError,
    ConvergenceError,
    StabilityError,
    TrivialBranchError,
)
from climate_front.models import BvpSpec
from climate_front.solvers.bvp import Profile
from climate_front.solvers.stefan import FrontState, Trajectory

__all__ = [
    'oracle_simulate',
    'oracle_bvp',
    'oracle_right_slope',
    'oracle_critical_speed',
]

# explicit diffusion number, dt <= safety * dy^2 h^2 / (2 d)
ORACLE_SAFETY = 0.4
ORACLE_RTOL = 1e-11
ORACLE_ATOL = 1e-13
# slope shooting ladder, +-10^k for k in the range
SHOOTING_EXPONENTS = range(-30, 4)


def _front_slope(w, dy, h):
    # third-order one-sided difference at y = 1
    return (11.0 * w[-1] - 18.0 * w[-2] + 9.0 * w[-3] - 2.0 * w[-4]) / (
        6.0 * dy * h
    )


class _ExplicitRun(object):

    def __init__(self, config, u0, refinement, reaction):
        self.params = config.params
        self.climate = config.climate
        self.mu = config.mu
        self.u0 = u0
        self.reaction = reaction
        self.n_points = refinement * (config.n_points - 1) + 1
        self.dy = 1.0 / (self.n_points - 1)
        self.y = np.linspace(0.0, 1.0, self.n_points)
        self.bound = max(self.params.plateau, u0.sup_norm)

    def stable_step(self, halvings):
        params = self.params
        h0 = self.u0.h0
        dt = ORACLE_SAFETY * self.dy**2 * h0**2 / (2.0 * params.d)
        if self.reaction:
            growth = max(abs(params.a), abs(params.a0))
            dt = min(dt, 0.5 / (growth + params.b * self.bound))
        return dt / 2**halvings

    def speed(self, t, h, w):
        slope = _front_slope(w, self.dy, h)
        xi = h - self.params.c * t
        rate = eval_mu(self.mu, eval_climate(self.climate, xi))
        return -rate * slope, slope

    def rhs(self, t, h, w, speed):
        params = self.params
        dy = self.dy
        diffusion = params.d / (h * h)
        drift = self.y * speed / h
        result = np.zeros_like(w)
        inner = slice(1, -1)
        result[inner] = diffusion * (w[2:] - 2.0 * w[1:-1] + w[:-2]) / (
            dy * dy
        ) + drift[inner] * (w[2:] - w[:-2]) / (2.0 * dy)
        result[0] = diffusion * 2.0 * (w[1] - w[0]) / (dy * dy)
        if self.reaction:
            growth = eval_climate(self.climate, self.y * h - params.c * t)
            result[:-1] += growth[:-1] * w[:-1] - params.b * w[:-1] ** 2
        return result

    def unstable(self, w, h):
        if not (np.all(np.isfinite(w)) and math.isfinite(h)):
            return True
        scale = max(self.bound, 1.0)
        return bool(
            np.min(w) < -1e-8 * scale
            or np.max(w) > self.bound * (1.0 + 1e-6) + 1e-12
        )

    def run(self, t_max, sample_every, c0, halvings):
        params = self.params
        dt_stable = self.stable_step(halvings)
        t = 0.0
        h = self.u0.h0
        w = self.u0.evaluate(self.y * h)
        w[-1] = 0.0
        rows = []
        states = []
        sample_index = 0
        while True:
            speed, slope = self.speed(t, h, w)
            due = sample_index * sample_every - 1e-12 * sample_every
            if t >= due or t >= t_max:
                state = FrontState(t, h, w.copy(), front_slope=slope)
                states.append(state)
                rows.append(
                    [
                        t,
                        h,
                        h - params.c * t,
                        math.nan if c0 is None else h - c0 * t,
                        state.sup_u,
                        slope,
                        math.nan,
                    ]
                )
                sample_index += 1
            if t >= t_max:
                break
            target = min(sample_index * sample_every, t_max)
            dt = min(dt_stable, target - t)
            w = w + dt * self.rhs(t, h, w, speed)
            w[-1] = 0.0
            h = h + dt * speed
            t = target if t + dt >= target else t + dt
            if self.unstable(w, h):
                return None
        return rows, states


def oracle_simulate(
    config,
    t_max=None,
    sample_every=None,
    sigma=None,
    u0=None,
    c0=None,
    refinement=ORACLE_REFINEMENT,
    reaction=True,
):
    """
    Integrates the free boundary problem with explicit Euler steps on a
    front-fixed mesh `refinement` times finer than the production one.

    The time step sits below the explicit diffusion limit computed from h0
    (h only grows, so the limit only relaxes). A run that loses finiteness,
    positivity or the max{a/b, |u0|} bound is restarted with half the step,
    up to ORACLE_MAX_HALVINGS times.

    Parameters
    ----------
    config : climate_front.lab_config.LabConfig
        Run configuration, desk-scale: the oracle is slow.
    t_max, sample_every : float, optional
        Horizon and sampling period, configured values by default.
    sigma : float, optional
        Initial amplitude overriding the configured one.
    u0 : InitialData, optional
        Initial density overriding the configured family.
    c0 : float, optional
        Critical speed for the h - c0 t column.
    refinement : int, optional
        Mesh refinement factor over config.n_points.
    reaction : bool, optional
        Drop the growth and logistic terms when False.

    Returns
    -------
    climate_front.solvers.stefan.Trajectory
        Trajectory with the states at every sample.

    Raises
    ------
    climate_front.errors.StabilityError
        If the run stays unstable after every allowed halving.
    """
    t_max = config.t_max if t_max is None else t_max
    sample_every = sample_every or config.sample_every
    if u0 is None:
        u0 = config.initial_data(sigma)
    runner = _ExplicitRun(config, u0, refinement, reaction)
    for halvings in range(ORACLE_MAX_HALVINGS + 1):
        result = runner.run(t_max, sample_every, c0, halvings)
        if result is not None:
            rows, states = result
            logging.debug(
                'oracle run reached t=%g with h=%.12g', t_max, rows[-1][1]
            )
            return Trajectory(
                rows,
                states[-1],
                states=states,
                max_density=max(state.sup_u for state in states),
                min_density=min(float(np.min(s.u)) for s in states),
            )
        logging.warning(
            'oracle run unstable, halving the time step (%d)', halvings + 1
        )
    raise StabilityError(
        f'explicit oracle unstable after {ORACLE_MAX_HALVINGS} halvings'
    )


class _Shooter(object):

    def __init__(self, spec):
        self.spec = spec
        if spec.kappa is not None:
            kappa_max = spec.kappa
        else:
            kappa_max = max(spec.climate.a, spec.climate.a0)
        self.scale = max(
            spec.left_value, spec.right_value, max(kappa_max, 0.0) / spec.b
        )
        below = self._event(lambda x, z: z[0] + 1e-3 * self.scale, -1)
        above = self._event(lambda x, z: z[0] - 10.0 * self.scale, 1)
        self.events = (below, above)
        self.evaluations = 0

    @staticmethod
    def _event(function, direction):
        function.terminal = True
        function.direction = direction
        return function

    def kappa(self, x):
        if self.spec.kappa is not None:
            return self.spec.kappa
        return eval_climate(self.spec.climate, x)

    def rhs(self, x, z):
        spec = self.spec
        v, p = z
        return [
            p,
            (-spec.drift * p - self.kappa(x) * v + spec.b * v * v) / spec.d,
        ]

    def integrate(self, slope, dense=False):
        self.evaluations += 1
        return solve_ivp(
            self.rhs,
            (self.spec.xl, self.spec.xr),
            [self.spec.left_value, slope],
            method='DOP853',
            rtol=ORACLE_RTOL,
            atol=ORACLE_ATOL,
            events=self.events,
            dense_output=dense,
        )

    def mismatch(self, slope):
        solution = self.integrate(slope)
        if solution.status == 1:
            return -1.0 if solution.t_events[0].size else 1.0
        v = solution.y[0]
        if self.spec.left_value == 0 and np.min(v[:-1]) < -1e-9 * np.max(
            np.abs(v)
        ):
            # sign changing solutions of zero data problems count as low
            return -1.0
        return float(v[-1] - self.spec.right_value)


def oracle_bvp(spec, n=2001, tol=1e-9):
    """
    Solves a logistic boundary value problem by shooting on the initial
    slope v'(xl) with an adaptive 8th order Runge-Kutta integrator.

    The slope ladder -10^k ... -10^-30, 10^-30 ... 10^k (positive half only
    when v(xl) = 0) is scanned for the sign change of v(xr; s) - right_value
    (trajectories that fall below zero or blow up are terminated and count
    as -1 / +1), then Brent's method refines s. Starting from the plateau
    a/b the departure is along the unstable manifold, so the relevant slopes
    are tiny and only the relative precision of s matters.

    Parameters
    ----------
    spec : climate_front.models.BvpSpec
        Problem description.
    n : int, optional
        Number of output grid points.
    tol : float, optional
        Accepted boundary mismatch.

    Returns
    -------
    climate_front.solvers.bvp.Profile
        Profile whose metadata also carry the exact end slope
        ("right_slope") and the shooting slope.

    Raises
    ------
    climate_front.errors.BracketError
        If the ladder shows no sign change, the table lists (s, mismatch).
    climate_front.errors.TrivialBranchError
        If zero boundary data admit only the zero solution.
    climate_front.errors.ConvergenceError
        If the final mismatch exceeds tol.
    """
    shooter = _Shooter(spec)
    slope = None
    # the nonzero equilibrium a/b on both ends is its own solution
    if (
        spec.kappa is not None
        and spec.left_value > 0
        and spec.left_value == spec.right_value
        and math.isclose(spec.b * spec.left_value, spec.kappa, rel_tol=1e-14)
    ):
        slope = 0.0
    if slope is None:
        # from v(xl) = 0 only rising trajectories can be positive
        ladder = [10.0**k for k in SHOOTING_EXPONENTS]
        if spec.left_value > 0:
            ladder = [-s for s in reversed(ladder)] + ladder
        table = [(s, shooter.mismatch(s)) for s in ladder]
        bracket = None
        for (s_lo, g_lo), (s_hi, g_hi) in zip(table, table[1:]):
            if g_lo * g_hi < 0:
                bracket = (s_lo, s_hi)
                break
        if bracket is None:
            if spec.left_value == 0 and spec.right_value == 0:
                raise TrivialBranchError(
                    'shooting finds no positive solution, only v = 0'
                )
            raise BracketError(
                'no sign change of the shooting mismatch', table=table
            )
        slope = brentq(
            shooter.mismatch,
            *bracket,
            xtol=1e-300,
            rtol=1e-15,
            maxiter=200,
            disp=False,
        )
    solution = shooter.integrate(slope, dense=True)
    if solution.status != 0:
        raise ConvergenceError(
            f'shooting trajectory with v\'(xl)={slope:.6e} left the '
            f'admissible range',
            iterations=shooter.evaluations,
        )
    residual = abs(float(solution.y[0, -1]) - spec.right_value)
    if residual > tol * max(shooter.scale, 1.0):
        raise ConvergenceError(
            f'shooting mismatch {residual:.3e} exceeds {tol:.1e}',
            iterations=shooter.evaluations,
            residual=residual,
        )
    grid = np.linspace(spec.xl, spec.xr, n)
    values = solution.sol(grid)[0]
    values[0] = spec.left_value
    values[-1] = spec.right_value
    return Profile(
        grid,
        values,
        {
            'method': 'shooting',
            'initial_slope': slope,
            'right_slope': float(solution.y[1, -1]),
            'residual': residual,
            'iterations': shooter.evaluations,
            'branch': 'positive' if np.max(values) > 0 else 'trivial',
        },
    )


def oracle_right_slope(profile):
    """Returns the shooting value of v'(xr) of an `oracle_bvp` profile."""
    return profile.metadata['right_slope']


def oracle_critical_speed(params, mu, X=None, tol=1e-9):
    """
    Computes c0 with shooting semi-waves: Brent's method on
    f(c) = -mu(a) q_c'(0) - c over [1e-3, 1 - 1e-3] * 2 sqrt(ad).

    Parameters
    ----------
    params : climate_front.models.ModelParams
        Problem constants.
    mu : climate_front.models.ExpansionRate
        Expansion rate.
    X : float, optional
        Truncation radius, 40 sqrt(d/a) by default.
    tol : float, optional
        Relative speed tolerance.

    Returns
    -------
    float
    """
    X = X or 40.0 * math.sqrt(params.d / params.a)
    rate = eval_mu(mu, params.a)
    c_max = params.max_wave_speed

    def f(c):
        spec = BvpSpec(
            xl=-X,
            xr=0.0,
            left_value=params.plateau,
            right_value=0.0,
            drift=c,
            d=params.d,
            b=params.b,
            kappa=params.a,
        )
        return -rate * oracle_right_slope(oracle_bvp(spec, n=16)) - c

    lo, hi = 1e-3 * c_max, (1.0 - 1e-3) * c_max
    f_lo, f_hi = f(lo), f(hi)
    if not f_lo > 0 > f_hi:
        raise BracketError(
            'oracle speed function has no sign change',
            table=[(lo, f_lo), (hi, f_hi)],
        )
    c0 = brentq(f, lo, hi, xtol=tol * c_max)
    logging.info('oracle c0=%.12g', c0)
    return c0
