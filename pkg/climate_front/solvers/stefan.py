# -*- mode:python; coding:utf-8; -*-
# created: 2026-10-17

"""
Front-fixing finite difference solver of the free boundary problem

    u_t = d u_xx + A(x - ct) u - b u^2,  0 < x < h(t),
    u_x(0, t) = u(h(t), t) = 0,  h'(t) = -mu(A(h - ct)) u_x(h, t).

With y = x / h(t) the density w(y, t) = u(y h, t) solves

    w_t = (d / h^2) w_yy + (y h' / h) w_y + A(y h - ct) w - b w^2

on the fixed interval [0, 1].
"""

import logging
import math
import os

import numpy as np
from scipy.integrate import trapezoid
from scipy.interpolate import CubicSpline

from climate_front.constants import BOUND_RTOL
from climate_front.environment.climate import eval_climate, eval_mu
from climate_front.environment.validation import validate
from climate_front.errors import PreconditionError, SolverError
from climate_front.utils.file_utils import safe_mkdir, write_table
from climate_front.utils.numerics import right_slope, tridiagonal_solve

__all__ = [
    'FrontState',
    'Trajectory',
    'StefanSolver',
    'step',
    'simulate',
    'interior_sup_gap',
    'profile_error',
    'TRAJECTORY_COLUMNS',
]

TRAJECTORY_COLUMNS = (
    't',
    'h',
    'h_minus_ct',
    'h_minus_c0t',
    'sup_u',
    'front_slope',
    'interior_gap',
)

# cell Peclet number above which the advection switches to upwinding
MAX_CELL_PECLET = 2.0
# grids starting coarser than max_dx are refined once h has doubled
COARSE_GROWTH = 2.0


class FrontState(object):

    """
    Density on the front-fixed grid at one time.

    Attributes
    ----------
    t : float
        Time.
    h : float
        Front position.
    u : numpy.ndarray
        Read-only densities at y_j = j / (n - 1), u[-1] = 0.
    front_slope : float
        One-sided estimate of u_x(h, t).
    degenerate : bool
        True if the last step did not advance h (h' = 0 or an increment
        below the floating point resolution of h).
    """

    def __init__(self, t, h, u, front_slope=None, degenerate=False):
        u = np.array(u, dtype=float)
        u.setflags(write=False)
        self.t = float(t)
        self.h = float(h)
        self.u = u
        self.dy = 1.0 / (u.size - 1)
        if front_slope is None:
            front_slope = float(right_slope(u, self.dy)) / self.h
        self.front_slope = front_slope
        self.degenerate = degenerate

    @property
    def y(self):
        return np.linspace(0.0, 1.0, self.u.size)

    @property
    def x(self):
        return self.y * self.h

    @property
    def sup_u(self):
        return float(np.max(self.u))

    def interpolate(self, x):
        """
        Density at arbitrary positions, 0 beyond the front.
        """
        return np.interp(x, self.x, self.u, right=0.0)

    def mass(self):
        """
        Total population, trapezoidal integral of u over [0, h].
        """
        return float(trapezoid(self.u, self.x))

    def as_profile(self):
        """
        Returns the state as (x, u) columns.
        """
        return np.column_stack([self.x, self.u])


class Trajectory(object):

    """
    Sampled time series of a free boundary run.

    Attributes
    ----------
    columns : dict
        Arrays keyed by TRAJECTORY_COLUMNS names.
    final_state : FrontState
        State at the last computed time.
    states : list of FrontState
        States at the sample times, kept only on request.
    stop_reason : str or None
        Reason reported by the stop condition, None if the run reached t_max.
    max_density, min_density : float
        Extreme densities over all steps.
    degenerate_steps : int
        Number of steps with h' = 0.
    steps : int
        Number of time steps.
    refinements : int
        Number of times the front-fixed grid was refined.
    """

    def __init__(
        self,
        rows,
        final_state,
        states=None,
        stop_reason=None,
        max_density=math.nan,
        min_density=math.nan,
        degenerate_steps=0,
        steps=0,
        snapshots=None,
        refinements=0,
    ):
        width = len(TRAJECTORY_COLUMNS)
        data = np.array(rows, dtype=float).reshape(-1, width)
        data.setflags(write=False)
        self.data = data
        self.columns = {
            name: data[:, index]
            for index, name in enumerate(TRAJECTORY_COLUMNS)
        }
        self.final_state = final_state
        self.states = states or []
        self.stop_reason = stop_reason
        self.max_density = max_density
        self.min_density = min_density
        self.degenerate_steps = degenerate_steps
        self.steps = steps
        self.snapshots = snapshots or []
        self.refinements = refinements

    def __len__(self):
        return self.data.shape[0]

    @property
    def times(self):
        return self.columns['t']

    @property
    def h(self):
        return self.columns['h']

    def gap_bounds(self):
        """
        Returns the (min, max) of h(t) - ct over the samples.
        """
        gap = self.columns['h_minus_ct']
        return float(np.min(gap)), float(np.max(gap))

    def h_increasing(self, strict=True):
        """
        Checks that h is increasing along the samples, strictly by default.
        """
        steps = np.diff(self.h)
        return bool(np.all(steps > 0 if strict else steps >= 0))

    def to_csv(self, file_path, header=None):
        write_table(file_path, TRAJECTORY_COLUMNS, self.data, header=header)


def interior_sup_gap(state, M, params):
    """
    Returns max |u(x, t) - a/b| over the grid points of [0, ct - M].

    Parameters
    ----------
    state : FrontState
        Solution state.
    M : float
        Distance kept from the shifting climate boundary.
    params : climate_front.models.ModelParams
        Problem constants.

    Returns
    -------
    float or None
        None when the window is empty (ct <= M).
    """
    edge = params.c * state.t - M
    if edge <= 0:
        return None
    inside = state.x <= edge
    return float(np.max(np.abs(state.u[inside] - params.plateau)))


def profile_error(state, target, anchor=None):
    """
    Front-anchored sup-norm distance between a state and a wave profile:

        sup over [0, h(t)] of |u(x, t) - target(x - h(t) + anchor)|.

    Parameters
    ----------
    state : FrontState
        Solution state.
    target : SemiWave, ForcedWave or FrontState
        Target profile with an `interpolate` method; left of its grid the
        target takes its first value.
    anchor : float, optional
        Right end of the target: L for forced waves, 0 for semi-waves, h for
        states.

    Returns
    -------
    float
    """
    if anchor is None:
        anchor = getattr(target, 'L', getattr(target, 'h', 0.0))
    xi = state.x - state.h + anchor
    return float(np.max(np.abs(state.u - target.interpolate(xi))))


class StefanSolver(object):

    """
    Semi-implicit front-fixing solver.

    Per step the front slope is extracted by a second-order one-sided
    difference, h is advanced explicitly by the Stefan condition and the
    density solves one tridiagonal system: diffusion, advection and the
    negative part of the growth are implicit, the logistic term is linearized
    as b w_old w_new and the positive part of the growth is explicit.
    """

    def __init__(
        self,
        params,
        climate,
        mu,
        u0,
        n_points=2048,
        dt_factor=0.25,
        dt_max=2e-3,
        fixed_dt=None,
        predictor_corrector=False,
        max_dx=None,
    ):
        """
        Parameters
        ----------
        params : climate_front.models.ModelParams
            Problem constants.
        climate : climate_front.models.ClimateProfile
            Climate profile.
        mu : climate_front.models.ExpansionRate
            Expansion rate.
        u0 : climate_front.environment.initial_data.InitialData
            Initial density.
        n_points : int, optional
            Number of y grid points.
        dt_factor, dt_max : float, optional
            Time step min(dt_max, dt_factor * dy * h^2 / d).
        fixed_dt : float, optional
            Constant time step overriding the adaptive rule.
        predictor_corrector : bool, optional
            Re-evaluate the front slope once per step.
        max_dx : float, optional
            Largest mesh width h / (n - 1). Above it the grid is refined by
            inserting the midpoints, grids that start coarser are refined
            each time their spacing doubles. None keeps the initial grid.
        """
        self.__log = logging.getLogger(self.__module__)
        self.params = params
        self.climate = climate
        self.mu = mu
        self.u0 = u0
        self.n_points = n_points
        self.dt_factor = dt_factor
        self.dt_max = dt_max
        self.fixed_dt = fixed_dt
        self.predictor_corrector = predictor_corrector
        self.max_dx = max_dx
        self.y = np.linspace(0.0, 1.0, n_points)
        if max_dx is None:
            self.dx_limit = math.inf
        else:
            initial_dx = u0.h0 / (n_points - 1)
            self.dx_limit = max(max_dx, COARSE_GROWTH * initial_dx)

    @classmethod
    def from_config(cls, config, sigma=None, u0=None):
        """
        Builds a solver from a run configuration.

        Parameters
        ----------
        config : climate_front.lab_config.LabConfig
            Run configuration.
        sigma : float, optional
            Initial amplitude overriding the configured one.
        u0 : InitialData, optional
            Initial density overriding the configured family.

        Returns
        -------
        StefanSolver
        """
        return cls(
            config.params,
            config.climate,
            config.mu,
            u0 if u0 is not None else config.initial_data(sigma),
            n_points=config.n_points,
            dt_factor=config.dt_factor,
            dt_max=config.dt_max,
            fixed_dt=config.fixed_dt,
            predictor_corrector=config.predictor_corrector,
            max_dx=config.max_dx,
        )

    @property
    def density_bound(self):
        return max(self.params.plateau, self.u0.sup_norm)

    def initial_state(self):
        u = self.u0.evaluate(self.y * self.u0.h0)
        u[-1] = 0.0
        return FrontState(0.0, self.u0.h0, u)

    def time_step(self, state):
        if self.fixed_dt is not None:
            return self.fixed_dt
        h = state.h
        adaptive = self.dt_factor * state.dy * h * h / self.params.d
        return min(self.dt_max, adaptive)

    def front_speed(self, state):
        """
        Returns h' = -mu(A(h - ct)) u_x(h, t) of a state.

        Raises
        ------
        climate_front.errors.SolverError
            If the speed is not finite or negative.
        """
        xi = state.h - self.params.c * state.t
        rate = eval_mu(self.mu, eval_climate(self.climate, xi))
        speed = -rate * state.front_slope
        if not math.isfinite(speed):
            raise SolverError(f'front speed is not finite at t={state.t:g}')
        if speed < 0:
            raise SolverError(
                f'negative front speed {speed:.3e} at t={state.t:g}, the '
                f'front slope {state.front_slope:.3e} is positive'
            )
        return speed

    def _advance_density(self, w, h_new, speed, t_new, dt):
        params = self.params
        dy = 1.0 / (w.size - 1)
        inner = w[:-1]
        y = np.linspace(0.0, 1.0, w.size)[:-1]
        diffusion = params.d / (h_new * h_new)
        drift = y * speed / h_new
        growth = eval_climate(self.climate, y * h_new - params.c * t_new)
        explicit = np.maximum(growth, 0.0)
        implicit = np.minimum(growth, 0.0)
        upwind = drift * dy > MAX_CELL_PECLET * diffusion
        base = diffusion / (dy * dy)
        lower = np.where(upwind, -base, -base + drift / (2.0 * dy))
        upper = np.where(
            upwind, -base - drift / dy, -base - drift / (2.0 * dy)
        )
        diag = 1.0 / dt + 2.0 * base + params.b * inner - implicit
        diag = np.where(upwind, diag + drift / dy, diag)
        # ghost node w_{-1} = w_1 at the no-flux end
        upper[0] = -2.0 * base
        rhs = inner * (1.0 / dt + explicit)
        result = np.zeros_like(w)
        result[:-1] = tridiagonal_solve(lower[1:], diag, upper[:-1], rhs)
        return result

    def step(self, state, dt):
        """
        Advances the state by one time step.

        Parameters
        ----------
        state : FrontState
            Current state.
        dt : float
            Time step, positive.

        Returns
        -------
        FrontState

        Raises
        ------
        climate_front.errors.SolverError
            On non-finite values or a negative front speed.
        """
        if not dt > 0:
            raise PreconditionError(f'time step must be positive, got {dt}')
        speed = self.front_speed(state)
        t_new = state.t + dt
        h_new = state.h + dt * speed
        w = self._advance_density(state.u, h_new, speed, t_new, dt)
        if self.predictor_corrector:
            predicted = FrontState(t_new, h_new, w)
            speed = 0.5 * (speed + self.front_speed(predicted))
            h_new = state.h + dt * speed
            w = self._advance_density(state.u, h_new, speed, t_new, dt)
        if not (np.all(np.isfinite(w)) and math.isfinite(h_new)):
            raise SolverError(f'non-finite solution at t={t_new:g}')
        # zero speed or an increment below the resolution of h
        degenerate = not h_new > state.h
        if degenerate:
            self.__log.debug('degenerate front step at t=%g', t_new)
        return FrontState(t_new, h_new, w, degenerate=degenerate)

    def refine(self, state):
        """
        Halves the grid spacing of a state: the old nodes are kept and the
        midpoints are filled from a not-a-knot cubic spline through them.

        Parameters
        ----------
        state : FrontState
            State to refine.

        Returns
        -------
        FrontState
            State with 2 n - 1 grid points, same t and h.
        """
        y = state.y
        fine_y = np.linspace(0.0, 1.0, 2 * y.size - 1)
        u = np.empty_like(fine_y)
        u[::2] = state.u
        midpoints = CubicSpline(y, state.u)(fine_y[1::2])
        u[1::2] = np.clip(midpoints, 0.0, self.density_bound)
        self.__log.info(
            'refined the grid to %d points at t=%g, h=%g',
            fine_y.size,
            state.t,
            state.h,
        )
        return FrontState(state.t, state.h, u, degenerate=state.degenerate)

    def needs_refinement(self, state):
        return state.h / (state.u.size - 1) > self.dx_limit

    def simulate(
        self,
        t_max,
        sample_every,
        c0=None,
        interior_window=10.0,
        stop_condition=None,
        keep_states=False,
        snapshot_every=None,
        snapshot_dir=None,
        header=None,
    ):
        """
        Integrates the problem up to t_max.

        Parameters
        ----------
        t_max : float
            Final time.
        sample_every : float
            Time between trajectory samples, time steps are shortened to hit
            the sample times exactly.
        c0 : float, optional
            Critical speed for the h - c0 t column (NaN when omitted).
        interior_window : float, optional
            M of the interior gap column.
        stop_condition : callable, optional
            Called as stop_condition(state, trajectory_rows) at every sample,
            a non-empty string return stops the run with that reason.
        keep_states : bool, optional
            Keep the states at the sample times.
        snapshot_every : float, optional
            Time between (x, u) snapshot files.
        snapshot_dir : str, optional
            Snapshot files directory, snapshots are kept in memory only when
            omitted.
        header : dict, optional
            Metadata written into snapshot files.

        Returns
        -------
        Trajectory
        """
        params = self.params
        state = self.initial_state()
        rows = [self._row(state, c0, interior_window)]
        states = [state] if keep_states else []
        snapshots = []
        max_density = state.sup_u
        min_density = float(np.min(state.u))
        degenerate_steps = 0
        steps = 0
        refinements = 0
        stop_reason = None
        sample_index = 1
        snapshot_index = 0
        next_snapshot = 0.0 if snapshot_every else math.inf
        if snapshot_dir and snapshot_every:
            safe_mkdir(snapshot_dir)
        while True:
            if state.t >= next_snapshot - 1e-12 * sample_every:
                snapshots.append(state)
                if snapshot_dir:
                    write_table(
                        os.path.join(
                            snapshot_dir,
                            'snapshot_{0:05d}.csv'.format(snapshot_index),
                        ),
                        ['x', 'u'],
                        state.as_profile(),
                        header=dict(header or {}, t=state.t, h=state.h),
                    )
                snapshot_index += 1
                next_snapshot = snapshot_index * snapshot_every
            if state.t >= t_max:
                break
            target = min(sample_index * sample_every, t_max)
            dt = self.time_step(state)
            landing = state.t + dt >= target - 1e-12 * sample_every
            if landing:
                dt = target - state.t
            state = self.step(state, dt)
            steps += 1
            if state.degenerate:
                if not degenerate_steps:
                    self.__log.warning(
                        'front stopped advancing at t=%g', state.t
                    )
                degenerate_steps += 1
            if self.needs_refinement(state):
                state = self.refine(state)
                refinements += 1
            if landing:
                state = FrontState(
                    target,
                    state.h,
                    state.u,
                    state.front_slope,
                    state.degenerate,
                )
            max_density = max(max_density, state.sup_u)
            min_density = min(min_density, float(np.min(state.u)))
            if not landing:
                continue
            sample_index += 1
            rows.append(self._row(state, c0, interior_window))
            if keep_states:
                states.append(state)
            if stop_condition is not None:
                stop_reason = stop_condition(state, rows)
                if stop_reason:
                    self.__log.info(
                        'run stopped at t=%g: %s', state.t, stop_reason
                    )
                    break
        bound = self.density_bound * (1.0 + BOUND_RTOL)
        if max_density > bound:
            self.__log.warning(
                'density %.12g exceeds the bound %.12g', max_density, bound
            )
        return Trajectory(
            rows,
            state,
            states=states,
            stop_reason=stop_reason,
            max_density=max_density,
            min_density=min_density,
            degenerate_steps=degenerate_steps,
            steps=steps,
            snapshots=snapshots,
            refinements=refinements,
        )

    def _row(self, state, c0, interior_window):
        gap = interior_sup_gap(state, interior_window, self.params)
        return [
            state.t,
            state.h,
            state.h - self.params.c * state.t,
            math.nan if c0 is None else state.h - c0 * state.t,
            state.sup_u,
            state.front_slope,
            math.nan if gap is None else gap,
        ]


def step(state, dt, solver):
    """
    Advances a state by one time step of the given solver.

    Parameters
    ----------
    state : FrontState
        Current state.
    dt : float
        Time step.
    solver : StefanSolver
        Solver defining the problem and the scheme options.

    Returns
    -------
    FrontState
    """
    return solver.step(state, dt)


def simulate(
    config,
    c0=None,
    stop_condition=None,
    keep_states=False,
    sigma=None,
    u0=None,
    snapshot_dir=None,
):
    """
    Validates a run configuration and integrates it up to config.t_max.

    Parameters
    ----------
    config : climate_front.lab_config.LabConfig
        Run configuration.
    c0 : float, optional
        Critical speed for the h - c0 t column.
    stop_condition : callable, optional
        See `StefanSolver.simulate`.
    keep_states : bool, optional
        Keep the states at the sample times.
    sigma : float, optional
        Initial amplitude overriding the configured one.
    u0 : InitialData, optional
        Initial density overriding the configured family.
    snapshot_dir : str, optional
        Directory for snapshot files.

    Returns
    -------
    Trajectory

    Raises
    ------
    climate_front.errors.PreconditionError
        If the configuration fails validation.
    """
    solver = StefanSolver.from_config(config, sigma=sigma, u0=u0)
    report = validate(solver.params, solver.climate, solver.mu, solver.u0)
    if not report.passed:
        raise PreconditionError(
            'invalid problem: '
            + '; '.join(violation.message for violation in report.violations)
        )
    return solver.simulate(
        config.t_max,
        config.sample_every,
        c0=c0,
        interior_window=config.interior_window,
        stop_condition=stop_condition,
        keep_states=keep_states,
        snapshot_every=config.snapshot_every,
        snapshot_dir=snapshot_dir,
        header={'config_hash': config.config_hash},
    )
