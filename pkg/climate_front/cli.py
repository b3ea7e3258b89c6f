# -*- mode:python; coding:utf-8; -*-
# created: 2026-10-17

"""
Free boundary laboratory command line interface.
"""

import argparse
import logging
import os
import sys

import numpy as np
import sentry_sdk

from climate_front.analysis.classify import (
    asymptotic_report,
    classification_record,
    classify_run,
    determine_regime,
    find_sigma_star,
    phase_sweep,
    verdict_monotonicity_audit,
)
from climate_front.analysis.verify import require_passed, run_suite
from climate_front.errors import (
    AcceptanceError,
    ConfigurationError,
    LineageError,
    NotSpreadingError,
    PreconditionError,
    SolverError,
    UsageError,
)
from climate_front.lab_config import LabConfig
from climate_front.solvers.forced_semiwave import (
    solve_critical_shift,
    solve_forced_semiwave,
)
from climate_front.solvers.semiwave import solve_critical_speed, solve_semiwave
from climate_front.solvers.stefan import simulate
from climate_front.utils.config import locate_config_file
from climate_front.utils.file_utils import safe_mkdir, write_jsonl, write_table

__all__ = ['main', 'init_args_parser', 'init_logger', 'init_sentry']

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_SOLVER = 2
EXIT_ACCEPTANCE = 3


class ArgumentParser(argparse.ArgumentParser):

    def error(self, message):
        raise UsageError(message)


def _float_list(text):
    try:
        return [float(item) for item in text.split(',') if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f'comma separated numbers expected, got "{text}"'
        )


def init_args_parser():
    """
    Laboratory command line arguments parser initialization.

    Returns
    -------
    argparse.ArgumentParser
    """
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('-c', '--config', help='configuration file path')
    common.add_argument('-o', '--out-dir', help='output files directory')
    common.add_argument(
        '-t', '--threads', type=int, help='worker pool size for scans'
    )
    common.add_argument(
        '--seedless',
        action='store_true',
        help='assert that no random numbers are involved (always true)',
    )
    common.add_argument(
        '-v',
        '--verbose',
        action='store_true',
        help='log solver iterations and time steps',
    )
    parser = ArgumentParser(
        prog='climate_front_lab',
        description='Free boundary laboratory for climate-shifted fronts',
    )
    commands = parser.add_subparsers(dest='command', required=True)
    commands.add_parser(
        'critical-speed', parents=[common], help='compute c0'
    )
    semiwave = commands.add_parser(
        'semiwave', parents=[common], help='compute the semi-wave q_c'
    )
    semiwave.add_argument('--c', type=float, help='speed, config c by default')
    forced = commands.add_parser(
        'forced-semiwave',
        parents=[common],
        help='compute the forced semi-wave v_L',
    )
    forced.add_argument('--L', type=float, required=True, help='shift')
    commands.add_parser('l0', parents=[common], help='compute L0')
    simulation = commands.add_parser(
        'simulate', parents=[common], help='run the free boundary problem'
    )
    simulation.add_argument('--sigma', type=float, help='initial amplitude')
    simulation.add_argument(
        '--asymptotics',
        action='store_true',
        help='estimate the limiting front gap of a spreading run',
    )
    classify = commands.add_parser(
        'classify', parents=[common], help='spreading or vanishing verdict'
    )
    classify.add_argument('--sigma', type=float, help='initial amplitude')
    classify.add_argument('--t-max', type=float, help='time horizon')
    threshold = commands.add_parser(
        'threshold', parents=[common], help='locate the sharp threshold'
    )
    threshold.add_argument(
        '--audit',
        type=int,
        default=0,
        help='number of amplitudes of the verdict monotonicity audit',
    )
    sweep = commands.add_parser(
        'sweep', parents=[common], help='two-parameter phase sweep'
    )
    sweep.add_argument('--rows', required=True, help='row axis: c, sigma, h0')
    sweep.add_argument('--row-values', required=True, type=_float_list)
    sweep.add_argument('--cols', required=True, help='column axis')
    sweep.add_argument('--col-values', required=True, type=_float_list)
    verify = commands.add_parser(
        'verify', parents=[common], help='run the verification suite'
    )
    verify.add_argument(
        '--artifact',
        action='append',
        default=[],
        help='output file whose lineage must match the configuration',
    )
    verify.add_argument(
        '--quick',
        action='store_true',
        help='skip the convergence studies',
    )
    return parser


def init_logger(verbose):
    """
    Sends log records of every thread to stderr.

    Parameters
    ----------
    verbose : bool
        Show DEBUG records (Newton iterations, time steps) as well.
    """
    level = logging.DEBUG if verbose else logging.INFO
    handler = logging.StreamHandler()
    handler.setLevel(level)
    handler.setFormatter(
        logging.Formatter(
            '%(asctime)s %(levelname)-8s [%(threadName)s]: %(message)s',
            '%y.%m.%d %H:%M:%S',
        )
    )
    root = logging.getLogger()
    root.addHandler(handler)
    root.setLevel(level)


def init_sentry(config):
    """
    Reports unexpected solver failures to Sentry when a DSN is configured.

    Parameters
    ----------
    config : LabConfig
    """
    if not config.sentry_dsn:
        return
    # user errors and documented refusals are not incidents
    expected = [
        ConfigurationError,
        UsageError,
        PreconditionError,
        NotSpreadingError,
    ]
    sentry_sdk.init(
        dsn=config.sentry_dsn,
        environment=config.sentry_environment,
        traces_sample_rate=config.sentry_traces_sample_rate,
        ignore_errors=expected,
    )


def _speed(config):
    return solve_critical_speed(
        config.params,
        config.mu,
        tol=config.speed_tol,
        dx=config.resolved_bvp_dx,
        truncation_tol=config.truncation_tol,
        bvp_tol=config.bvp_tol,
        max_iterations=config.max_newton_iterations,
        threads=config.threads,
    )


def _header(config, **extra):
    header = {'config_hash': config.config_hash}
    header.update(extra)
    return header


def cmd_critical_speed(config, args):
    speed = _speed(config)
    wave = solve_semiwave(
        speed.c0,
        config.params,
        tol=config.bvp_tol,
        X=speed.truncation_radius,
        dx=config.resolved_bvp_dx,
        max_iterations=config.max_newton_iterations,
    )
    write_jsonl(
        os.path.join(config.out_dir, 'critical_speed.jsonl'),
        [speed.model_dump(mode='json', exclude={'scan'})],
        header=_header(config),
    )
    write_table(
        os.path.join(config.out_dir, 'critical_speed_scan.csv'),
        ['c', 'f'],
        [[sample.c, sample.value] for sample in speed.scan],
        header=_header(config, c0=speed.c0),
    )
    wave.profile.to_csv(
        os.path.join(config.out_dir, 'critical_semiwave.csv'),
        header=_header(config, c0=speed.c0, X=wave.X, slope0=wave.slope0),
    )
    print(f'c0 = {speed.c0:.12g}')
    print(f'residual = {speed.residual:.3e}')
    print(f'X = {speed.truncation_radius:.6g}')
    return EXIT_OK


def cmd_semiwave(config, args):
    c = config.c if args.c is None else args.c
    wave = solve_semiwave(
        c,
        config.params,
        tol=config.bvp_tol,
        dx=config.resolved_bvp_dx,
        truncation_tol=config.truncation_tol,
        max_iterations=config.max_newton_iterations,
    )
    wave.profile.to_csv(
        os.path.join(config.out_dir, 'semiwave.csv'),
        header=_header(config, c=c, X=wave.X, slope0=wave.slope0),
    )
    print(f'q_c\'(0) = {wave.slope0:.12g} (c = {c:.12g}, X = {wave.X:.6g})')
    return EXIT_OK


def cmd_forced_semiwave(config, args):
    speed = _speed(config)
    wave = solve_forced_semiwave(
        args.L,
        config.params,
        config.climate,
        config.c,
        tol=config.bvp_tol,
        c0=speed.c0,
        dx=config.resolved_bvp_dx,
        truncation_tol=config.truncation_tol,
        max_iterations=config.max_newton_iterations,
    )
    wave.profile.to_csv(
        os.path.join(config.out_dir, 'forced_semiwave.csv'),
        header=_header(config, L=args.L, X=wave.X, slopeL=wave.slopeL),
    )
    print(f'v_L\'(L) = {wave.slopeL:.12g} (L = {args.L:.12g})')
    return EXIT_OK


def _shift(config, c0):
    return solve_critical_shift(
        config.params,
        config.climate,
        config.mu,
        config.c,
        tol=config.l0_tol,
        c0=c0,
        dx=config.resolved_bvp_dx,
        bvp_tol=config.bvp_tol,
        truncation_tol=config.truncation_tol,
        max_iterations=config.max_newton_iterations,
    )


def cmd_l0(config, args):
    c0 = _speed(config).c0
    shift = _shift(config, c0)
    wave = solve_forced_semiwave(
        shift.L0,
        config.params,
        config.climate,
        config.c,
        tol=config.bvp_tol,
        c0=c0,
        X=shift.truncation_radius,
        dx=config.resolved_bvp_dx,
        max_iterations=config.max_newton_iterations,
    )
    write_jsonl(
        os.path.join(config.out_dir, 'l0.jsonl'),
        [shift.model_dump(mode='json')],
        header=_header(config),
    )
    wave.profile.to_csv(
        os.path.join(config.out_dir, 'critical_shift_wave.csv'),
        header=_header(config, L0=shift.L0, c0=c0, slopeL=wave.slopeL),
    )
    print(f'L0 = {shift.L0:.12g}')
    print(f'residual = {shift.residual:.3e}')
    print(f'c0 = {c0:.12g}')
    return EXIT_OK


def cmd_simulate(config, args):
    c0 = _speed(config).c0 if args.asymptotics else None
    snapshot_dir = None
    if config.snapshot_every:
        snapshot_dir = os.path.join(config.out_dir, 'snapshots')
    trajectory = simulate(
        config, c0=c0, sigma=args.sigma, snapshot_dir=snapshot_dir
    )
    trajectory.to_csv(
        os.path.join(config.out_dir, 'trajectory.csv'),
        header=_header(config),
    )
    state = trajectory.final_state
    print(f'h({state.t:.6g}) = {state.h:.12g}')
    if args.asymptotics:
        regime = determine_regime(config.c, c0)
        report = asymptotic_report(
            trajectory,
            regime,
            config.params,
            c0,
            gap_window=config.gap_window,
        )
        write_jsonl(
            os.path.join(config.out_dir, 'asymptotics.jsonl'),
            [report.model_dump(mode='json')],
            header=_header(config),
        )
        print(
            f'{report.gap_kind} -> {report.gap_estimate:.12g} '
            f'(oscillation {report.oscillation:.3e}, {regime})'
        )
    return EXIT_OK


def cmd_classify(config, args):
    classification = classify_run(config, t_max=args.t_max, sigma=args.sigma)
    write_jsonl(
        os.path.join(config.out_dir, 'classification.jsonl'),
        [classification_record(classification)],
        header=_header(config),
    )
    print(classification.verdict)
    return EXIT_OK


def cmd_threshold(config, args):
    report = find_sigma_star(config)
    records = [report.model_dump(mode='json')]
    if args.audit:
        sigmas = np.geomspace(config.sigma_lo, config.sigma_hi, args.audit)
        audit = verdict_monotonicity_audit(config, sigmas)
        records.append(audit.model_dump(mode='json'))
        print(f'verdict monotonicity: {"ok" if audit.passed else "FAILED"}')
    write_jsonl(
        os.path.join(config.out_dir, 'threshold.jsonl'),
        records,
        header=_header(config),
    )
    print(
        f'{report.status}: sigma* in [{report.sigma_lo:.6g}, '
        f'{report.sigma_hi:.6g}]'
    )
    return EXIT_OK


def cmd_sweep(config, args):
    cells = phase_sweep(
        config,
        args.rows,
        args.row_values,
        args.cols,
        args.col_values,
        out_dir=config.out_dir,
    )
    failed = sum(1 for cell in cells if cell.error)
    print(f'{len(cells)} cells, {failed} failed')
    return EXIT_OK


def cmd_verify(config, args):
    manifest = run_suite(
        config,
        artifacts=args.artifact,
        include_convergence=not args.quick,
    )
    for check in manifest.checks:
        print(f'{"PASS" if check.passed else "FAIL"} {check.name}')
    require_passed(manifest)
    return EXIT_OK


COMMANDS = {
    'critical-speed': cmd_critical_speed,
    'semiwave': cmd_semiwave,
    'forced-semiwave': cmd_forced_semiwave,
    'l0': cmd_l0,
    'simulate': cmd_simulate,
    'classify': cmd_classify,
    'threshold': cmd_threshold,
    'sweep': cmd_sweep,
    'verify': cmd_verify,
}


def main(sys_args):
    args_parser = init_args_parser()
    try:
        args = args_parser.parse_args(sys_args)
    except UsageError as e:
        args_parser.print_usage(sys.stderr)
        sys.stderr.write('{0}: error: {1}\n'.format(args_parser.prog, e))
        return EXIT_USAGE
    try:
        config_file = locate_config_file('lab', args.config)
        config = LabConfig(
            config_file, out_dir=args.out_dir, threads=args.threads
        )
    except ValueError as e:
        sys.stderr.write('Configuration error: {0}\n'.format(e))
        return EXIT_USAGE
    init_logger(args.verbose)
    init_sentry(config)
    if args.seedless:
        logging.debug('seedless run: no random numbers are involved')
    safe_mkdir(config.out_dir)
    try:
        return COMMANDS[args.command](config, args)
    except (AcceptanceError, LineageError) as e:
        logging.error('verification failed: %s', e)
        return EXIT_ACCEPTANCE
    except SolverError as e:
        logging.error('solver error: %s', e)
        return EXIT_SOLVER
    except (
        UsageError,
        ConfigurationError,
        PreconditionError,
        NotSpreadingError,
        ValueError,
    ) as e:
        logging.error('%s', e)
        return EXIT_USAGE
