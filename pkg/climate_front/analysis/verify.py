# -*- mode:python; coding:utf-8; -*-
# created: 2026-10-17

"""
Convergence studies, discrete comparison checks and the verification suite
that certifies a configuration before acceptance runs.
"""

import json
import logging
import math
import os

import numpy as np

from climate_front.analysis.oracles import (
    oracle_bvp,
    oracle_critical_speed,
    oracle_right_slope,
    oracle_simulate,
)
from climate_front.environment.climate import homogeneous_counterpart
from climate_front.errors import (
    AcceptanceError,
    LineageError,
    PreconditionError,
    SolverError,
)
from climate_front.models import (
    CheckResult,
    ConvergenceReport,
    VerificationManifest,
)
from climate_front.solvers.bvp import (
    derivative_at_right,
    left_truncation_radius,
    semiwave_spec,
    solve_logistic_bvp,
)
from climate_front.solvers.forced_semiwave import find_L0
from climate_front.solvers.semiwave import solve_critical_speed
from climate_front.solvers.stefan import simulate
from climate_front.utils.file_utils import (
    hash_file,
    read_header,
    safe_mkdir,
)
from climate_front.utils.numerics import observed_order
from climate_front.utils.pool import ordered_map

__all__ = [
    'CONVERGENCE_TARGETS',
    'convergence_study',
    'comparison_runs',
    'comparison_check',
    'domination_check',
    'rerun_identical',
    'zero_reaction_check',
    'check_lineage',
    'run_suite',
    'require_passed',
]

CONVERGENCE_TARGETS = ('slope0', 'L0', 'h_space', 'h_time')

# u1 <= u2 + DENSITY_SLACK for ordered runs
DENSITY_SLACK = 1e-6
ORACLE_H_RTOL = 1e-2
ORACLE_SLOPE_TOL = 1e-5
ORACLE_SPEED_RTOL = 1e-4
ORDER_TOL = 0.3
MASS_RTOL = 1e-3
MANIFEST_NAME = 'verify_manifest.json'


def _slope0_levels(config, levels):
    params = config.params
    c = min(params.c, 0.5 * params.max_wave_speed)
    coarse = config.resolved_bvp_dx * 2 ** (levels - 1)
    X = left_truncation_radius(
        params, c, config.truncation_tol, dx=coarse, bvp_tol=config.bvp_tol
    )
    # grids of every level share both end points
    X = math.ceil(X / coarse) * coarse
    spec = semiwave_spec(params, c, X)
    resolutions = [coarse / 2**k for k in range(levels)]

    def evaluate(dx):
        profile = solve_logistic_bvp(spec, dx=dx, tol=config.bvp_tol)
        return derivative_at_right(profile)

    return resolutions, evaluate


def _shift_levels(config, levels):
    coarse = config.resolved_bvp_dx * 2 ** (levels - 1)
    resolutions = [coarse / 2**k for k in range(levels)]

    def evaluate(dx):
        return find_L0(
            config.params,
            config.climate,
            config.mu,
            config.c,
            tol=config.l0_tol,
            dx=dx,
            bvp_tol=config.bvp_tol,
            truncation_tol=config.truncation_tol,
        )

    return resolutions, evaluate


def _space_levels(config, levels):
    dt = config.fixed_dt or config.dt_max
    points = [
        (config.n_points - 1) // 2 ** (levels - 1 - k) + 1
        for k in range(levels)
    ]
    if points[0] < 16:
        raise PreconditionError(
            f'n_points={config.n_points} is too coarse for {levels} levels'
        )

    def evaluate(n_points):
        run = config.override(n_points=n_points, fixed_dt=dt)
        return simulate(run).final_state.h

    return points, evaluate


def _time_levels(config, levels):
    coarse = (config.fixed_dt or config.dt_max) * 2 ** (levels - 1)
    resolutions = [coarse / 2**k for k in range(levels)]

    def evaluate(dt):
        return simulate(config.override(fixed_dt=dt)).final_state.h

    return resolutions, evaluate


_LEVEL_BUILDERS = {
    'slope0': _slope0_levels,
    'L0': _shift_levels,
    'h_space': _space_levels,
    'h_time': _time_levels,
}


def convergence_study(target, config, levels=3, threads=None):
    """
    Measures the observed order of a computed quantity under repeated
    halving of the mesh (or time step).

    Parameters
    ----------
    target : str
        "slope0" (semi-wave slope at 0 for min(c, sqrt(ad))), "L0" (critical
        shift), "h_space" (h(t_max) under y-mesh halving) or "h_time"
        (h(t_max) under time step halving).
    config : climate_front.lab_config.LabConfig
        Run configuration, the finest level uses the configured resolution
        for "slope0", "L0" and "h_space".
    levels : int, optional
        Number of resolutions, at least 3.
    threads : int, optional
        Levels computed concurrently, config.threads by default.

    Returns
    -------
    climate_front.models.ConvergenceReport
        Orders from consecutive difference ratios; non-monotone differences
        are flagged in `monotone` and `message`.
    """
    if target not in _LEVEL_BUILDERS:
        raise PreconditionError(
            f'unknown convergence target "{target}", expected one of '
            f'{", ".join(CONVERGENCE_TARGETS)}'
        )
    if levels < 3:
        raise PreconditionError('a convergence study needs at least 3 levels')
    resolutions, evaluate = _LEVEL_BUILDERS[target](config, levels)
    values = ordered_map(
        evaluate, resolutions, max_workers=threads or config.threads
    )
    differences = [abs(b - a) for a, b in zip(values, values[1:])]
    orders = [float(order) for order in observed_order(differences)]
    monotone = all(b < a for a, b in zip(differences, differences[1:]))
    message = '' if monotone else 'differences do not decrease monotonically'
    if target == 'h_space':
        resolutions = [1.0 / (n - 1) for n in resolutions]
    logging.info('%s convergence orders: %s', target, orders)
    return ConvergenceReport(
        target=target,
        resolutions=[float(r) for r in resolutions],
        values=[float(v) for v in values],
        differences=differences,
        orders=orders,
        monotone=monotone,
        message=message,
    )


def comparison_runs(config, factor=1.2):
    """
    Runs the configured problem from u0 and from factor * u0, keeping the
    sampled states.

    Returns
    -------
    tuple of climate_front.solvers.stefan.Trajectory
    """
    u0 = config.initial_data()
    low = simulate(config, u0=u0, keep_states=True)
    high = simulate(config, u0=u0.scaled(factor), keep_states=True)
    return low, high


def _ordered(name, lower, upper, dx, config_hash=None):
    if len(lower.states) != len(upper.states):
        raise PreconditionError(
            'ordered runs must share the sample times, rerun with '
            'keep_states=True'
        )
    front_excess = float(np.max(lower.h - upper.h))
    density_excess = -math.inf
    for low, high in zip(lower.states, upper.states):
        gap = low.u - high.interpolate(low.x)
        density_excess = max(density_excess, float(np.max(gap)))
    passed = front_excess <= dx and density_excess <= DENSITY_SLACK
    return CheckResult(
        name=name,
        passed=passed,
        value=max(front_excess, density_excess),
        tolerance=max(dx, DENSITY_SLACK),
        detail=(
            f'max h1 - h2 = {front_excess:.3e} (allowed {dx:.3e}), '
            f'max u1 - u2 = {density_excess:.3e} '
            f'(allowed {DENSITY_SLACK:.1e})'
        ),
        config_hash=config_hash,
    )


def _mesh_width(trajectory):
    state = trajectory.final_state
    return float(state.h / (state.u.size - 1))


def comparison_check(run_lo, run_hi, config_hash=None):
    """
    Checks the discrete comparison principle for runs with ordered initial
    data: h1(t) <= h2(t) + dx and u1 <= u2 + 1e-6 at every recorded time,
    dx being the final mesh width of the lower run.

    Returns
    -------
    climate_front.models.CheckResult
    """
    return _ordered(
        'comparison', run_lo, run_hi, _mesh_width(run_lo), config_hash
    )


def domination_check(run, homogeneous_run, config_hash=None):
    """
    Checks that a run stays below its homogeneous counterpart (A = a,
    mu = mu(a)) at every recorded time.

    Returns
    -------
    climate_front.models.CheckResult
    """
    return _ordered(
        'domination', run, homogeneous_run, _mesh_width(run), config_hash
    )


def homogeneous_config(config):
    """
    Returns the configuration of the homogeneous comparison problem.
    """
    params, _, rate = homogeneous_counterpart(config.params, config.mu)
    return config.override(
        a0=params.a0, relaxed=True, mu0=rate.mu0, mu_slope=0.0
    )


def rerun_identical(config, out_dir):
    """
    Runs a configuration twice and compares the sha256 of the two
    trajectory files.

    Parameters
    ----------
    config : climate_front.lab_config.LabConfig
        Run configuration.
    out_dir : str
        Directory for the two trajectory files.

    Returns
    -------
    climate_front.models.CheckResult
    """
    safe_mkdir(out_dir)
    header = {'config_hash': config.config_hash}
    checksums = []
    for name in ('rerun_a.csv', 'rerun_b.csv'):
        path = os.path.join(out_dir, name)
        simulate(config).to_csv(path, header=header)
        checksums.append(hash_file(path))
    return CheckResult(
        name='rerun-identical',
        passed=checksums[0] == checksums[1],
        detail=' '.join(checksums),
        config_hash=config.config_hash,
    )


def zero_reaction_check(config, t_max=None):
    """
    Reaction-free sanity check of the explicit oracle: with constant mu the
    mass int u dx only leaves through the free end, so it decreases while
    mass + (d / mu) h stays constant.

    Returns
    -------
    climate_front.models.CheckResult
    """
    config = config.override(mu_slope=0.0)
    trajectory = oracle_simulate(config, t_max=t_max, reaction=False)
    masses = np.array([state.mass() for state in trajectory.states])
    invariant = masses + config.d / config.mu0 * trajectory.h
    drift = float(np.max(np.abs(invariant - invariant[0])))
    tolerance = MASS_RTOL * float(invariant[0])
    decreasing = bool(np.all(np.diff(masses) <= 0))
    return CheckResult(
        name='zero-reaction-mass',
        passed=decreasing and drift <= tolerance,
        value=drift,
        tolerance=tolerance,
        detail=f'mass non-increasing: {decreasing}',
        config_hash=config.config_hash,
    )


def check_lineage(config, paths):
    """
    Checks that every output file carries the configuration hash.

    Raises
    ------
    climate_front.errors.LineageError
        If a file header lacks the hash or carries another one.
    """
    expected = config.config_hash
    for path in paths:
        found = read_header(path).get('config_hash')
        if found != expected:
            raise LineageError(
                f'{path} was produced by config {found}, expected {expected}'
            )
    return CheckResult(
        name='lineage',
        passed=True,
        detail=f'{len(paths)} files',
        config_hash=expected,
    )


def _speed_checks(config):
    params = config.params
    speed = solve_critical_speed(
        params,
        config.mu,
        tol=config.speed_tol,
        dx=config.resolved_bvp_dx,
        truncation_tol=config.truncation_tol,
        bvp_tol=config.bvp_tol,
        threads=config.threads,
    )
    in_range = 0 < speed.c0 < params.max_wave_speed
    reference = oracle_critical_speed(params, config.mu)
    mismatch = abs(speed.c0 - reference) / reference
    return [
        CheckResult(
            name='critical-speed-range',
            passed=in_range,
            value=speed.c0,
            detail=f'c0 in (0, {params.max_wave_speed:.12g})',
        ),
        CheckResult(
            name='critical-speed-oracle',
            passed=mismatch <= ORACLE_SPEED_RTOL,
            value=mismatch,
            tolerance=ORACLE_SPEED_RTOL,
            detail=f'c0={speed.c0:.12g}, oracle {reference:.12g}',
        ),
    ]


def _bvp_oracle_check(config):
    params = config.params
    c = min(params.c, 0.5 * params.max_wave_speed)
    X = 20.0 * math.sqrt(params.d / params.a)
    spec = semiwave_spec(params, c, X)
    slope = derivative_at_right(
        solve_logistic_bvp(spec, dx=config.resolved_bvp_dx, tol=config.bvp_tol)
    )
    reference = oracle_right_slope(oracle_bvp(spec))
    tolerance = ORACLE_SLOPE_TOL * max(1.0, abs(reference))
    return CheckResult(
        name='bvp-oracle-slope',
        passed=abs(slope - reference) <= tolerance,
        value=abs(slope - reference),
        tolerance=tolerance,
        detail=f'slope {slope:.12g}, oracle {reference:.12g}',
    )


def _simulate_oracle_check(config, t_max):
    main = simulate(config.override(t_max=t_max)).final_state.h
    reference = oracle_simulate(config, t_max=t_max).final_state.h
    mismatch = abs(main - reference) / reference
    return CheckResult(
        name='stefan-oracle-h',
        passed=mismatch <= ORACLE_H_RTOL,
        value=mismatch,
        tolerance=ORACLE_H_RTOL,
        detail=f'h(T)={main:.12g}, oracle {reference:.12g}',
    )


def _invariant_check(config, trajectory):
    bound = max(config.params.plateau, config.initial_data().sup_norm)
    within = (
        trajectory.min_density >= 0
        and trajectory.max_density <= bound * (1.0 + 1e-6)
    )
    increasing = trajectory.h_increasing(
        strict=trajectory.degenerate_steps == 0
    )
    return CheckResult(
        name='invariants',
        passed=within and increasing,
        value=trajectory.max_density,
        tolerance=bound * (1.0 + 1e-6),
        detail=(
            f'u in [{trajectory.min_density:.3e}, '
            f'{trajectory.max_density:.12g}], h increasing: {increasing}'
        ),
    )


def _order_check(name, report, expected):
    order = report.order
    return CheckResult(
        name=name,
        passed=math.isfinite(order) and abs(order - expected) <= ORDER_TOL,
        value=order,
        tolerance=ORDER_TOL,
        detail=f'orders {report.orders} {report.message}'.strip(),
    )


def _guarded(name, check, *args):
    try:
        return check(*args)
    except (SolverError, PreconditionError) as error:
        logging.error('check %s failed: %s', name, error)
        return [CheckResult(name=name, passed=False, detail=str(error))]


def run_suite(
    config,
    out_dir=None,
    artifacts=(),
    oracle_t_max=0.5,
    oracle_n_points=64,
    include_convergence=True,
):
    """
    Runs the verification suite of a configuration and writes the pass /
    fail manifest.

    Parameters
    ----------
    config : climate_front.lab_config.LabConfig
        Configuration to certify.
    out_dir : str, optional
        Directory for the manifest and the rerun files, config.out_dir by
        default.
    artifacts : list of str, optional
        Previously produced output files whose lineage must match.
    oracle_t_max : float, optional
        Horizon of the explicit oracle cross-check.
    oracle_n_points : int, optional
        Production mesh of the oracle cross-check, refined 4 times by the
        oracle.
    include_convergence : bool, optional
        Run the space and time convergence studies.

    Returns
    -------
    climate_front.models.VerificationManifest

    Raises
    ------
    climate_front.errors.LineageError
        If an artifact comes from another configuration.
    """
    out_dir = out_dir or config.out_dir
    config_hash = config.config_hash
    check_lineage(config, artifacts)
    checks = []
    checks += _guarded('critical-speed', _speed_checks, config)
    checks += _guarded(
        'bvp-oracle-slope', lambda c: [_bvp_oracle_check(c)], config
    )
    desk = config.override(n_points=oracle_n_points, t_max=oracle_t_max)
    checks += _guarded(
        'stefan-oracle-h',
        lambda c: [_simulate_oracle_check(c, oracle_t_max)],
        desk,
    )
    checks += _guarded(
        'zero-reaction-mass',
        lambda c: [zero_reaction_check(c, t_max=oracle_t_max)],
        desk,
    )

    def ordered_checks(c):
        low, high = comparison_runs(c)
        results = [
            comparison_check(low, high),
            _invariant_check(c, low),
        ]
        if not c.relaxed:
            homogeneous = simulate(homogeneous_config(c), keep_states=True)
            results.append(domination_check(low, homogeneous))
        return results

    checks += _guarded('comparison', ordered_checks, config)
    rerun_dir = os.path.join(out_dir, 'rerun')
    checks += _guarded(
        'rerun-identical', lambda c: [rerun_identical(c, rerun_dir)], config
    )
    rerun_files = [
        os.path.join(rerun_dir, name)
        for name in ('rerun_a.csv', 'rerun_b.csv')
        if os.path.exists(os.path.join(rerun_dir, name))
    ]
    checks.append(check_lineage(config, rerun_files))
    if include_convergence:
        checks += _guarded(
            'order-space',
            lambda c: [
                _order_check(
                    'order-space', convergence_study('slope0', c), 2.0
                )
            ],
            config,
        )
        checks += _guarded(
            'order-time',
            lambda c: [
                _order_check(
                    'order-time', convergence_study('h_time', c), 1.0
                )
            ],
            desk,
        )
    for check in checks:
        check.config_hash = config_hash
    manifest = VerificationManifest(config_hash=config_hash, checks=checks)
    safe_mkdir(out_dir)
    with open(os.path.join(out_dir, MANIFEST_NAME), 'w') as fd:
        json.dump(manifest.model_dump(mode='json'), fd, sort_keys=True)
        fd.write('\n')
    logging.info(
        'verification %s: %d checks',
        'passed' if manifest.passed else 'FAILED',
        len(checks),
    )
    return manifest


def require_passed(manifest):
    """
    Raises AcceptanceError listing the failed checks of a manifest.
    """
    failed = [check.name for check in manifest.checks if not check.passed]
    if failed:
        raise AcceptanceError(f'failed checks: {", ".join(failed)}')
    return manifest
