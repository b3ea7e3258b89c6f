# -*- mode:python; coding:utf-8; -*-
# created: 2026-10-17

"""
Spreading / vanishing classification, sharp threshold search, long time
front asymptotics and phase sweeps.
"""

import logging
import math
import os

import numpy as np

from climate_front.constants import CRITICAL_SPEED_MATCH
from climate_front.environment.climate import critical_length
from climate_front.errors import (
    BracketError,
    MonotonicityError,
    NotSpreadingError,
    PreconditionError,
)
from climate_front.models import (
    AsymptoticReport,
    Certificate,
    Classification,
    MonotonicityAudit,
    PhaseCell,
    SigmaEvaluation,
    SigmaStarReport,
)
from climate_front.solvers.stefan import simulate
from climate_front.utils.file_utils import write_jsonl, write_table
from climate_front.utils.pool import ordered_map

__all__ = [
    'SPREADING',
    'VANISHING',
    'UNDETERMINED',
    'classify_run',
    'classification_record',
    'find_sigma_star',
    'verdict_monotonicity_audit',
    'determine_regime',
    'asymptotic_report',
    'phase_sweep',
    'SWEEP_AXES',
]

SPREADING = 'Spreading'
VANISHING = 'Vanishing'
UNDETERMINED = 'Undetermined'

SWEEP_AXES = ('c', 'sigma', 'h0')

_VERDICT_CODES = {SPREADING: 1.0, VANISHING: 0.0, UNDETERMINED: -1.0}


class _SpreadingVanishingMonitor(object):

    """
    Stop condition of a classification run.

    Fires "critical-length" once h reaches pi/2 sqrt(d/a), and "decay" once
    t >= min_time, sup u < density_level and h gained less than growth_level
    over the trailing window of the run while below the critical length.
    """

    def __init__(self, config):
        params = config.params
        self.critical_length = critical_length(params)
        self.density_level = config.vanish_rel_density * params.plateau
        self.growth_level = config.vanish_rel_growth * params.h0
        self.window = config.vanish_window
        self.min_time = config.resolved_vanish_min_time
        self.rule = None
        self.detail = ''

    def __call__(self, state, rows):
        if state.h >= self.critical_length:
            self.rule = 'critical-length'
            self.detail = (
                f'h={state.h:.12g} >= pi/2 sqrt(d/a)='
                f'{self.critical_length:.12g}'
            )
            return self.rule
        if state.t < self.min_time or state.sup_u >= self.density_level:
            return None
        start = (1.0 - self.window) * state.t
        times = np.array([row[0] for row in rows])
        fronts = np.array([row[1] for row in rows])
        h_start = float(np.interp(start, times, fronts))
        gained = state.h - h_start
        if gained < self.growth_level:
            self.rule = 'decay'
            self.detail = (
                f'sup u={state.sup_u:.3e} < {self.density_level:.3e}, '
                f'h gained {gained:.3e} < {self.growth_level:.3e} since '
                f't={start:.6g}'
            )
            return self.rule
        return None


def classify_run(config, t_max=None, sigma=None, c0=None, u0=None):
    """
    Classifies a run as Spreading, Vanishing or Undetermined.

    Spreading is certified the moment h(t) >= pi/2 sqrt(d/a) (immediately
    when h0 is already that long). Vanishing is the decay heuristic of
    `_SpreadingVanishingMonitor`. Anything else is Undetermined at t_max.

    Parameters
    ----------
    config : climate_front.lab_config.LabConfig
        Run configuration.
    t_max : float, optional
        Time horizon overriding config.t_max.
    sigma : float, optional
        Initial amplitude overriding config.sigma.
    c0 : float, optional
        Critical speed for the trajectory h - c0 t column.
    u0 : InitialData, optional
        Initial density overriding the configured family.

    Returns
    -------
    climate_front.models.Classification
    """
    if t_max is not None:
        config = config.override(t_max=t_max)
    if sigma is not None:
        config = config.override(sigma=sigma)
    params = config.params
    length = critical_length(params)
    initial = u0 if u0 is not None else config.initial_data()
    amplitude = initial.sigma if initial.sigma is not None else math.nan
    if params.h0 >= length:
        logging.info(
            'h0=%g >= critical length %g, spreading is certain',
            params.h0,
            length,
        )
        return Classification(
            verdict=SPREADING,
            certificate=Certificate(
                rule='initial-range',
                time=0.0,
                detail=f'h0={params.h0:.12g} >= pi/2 sqrt(d/a)={length:.12g}',
            ),
            sigma=amplitude,
            final_time=0.0,
            final_h=params.h0,
            final_sup_u=initial.sup_norm,
            critical_length=length,
            gap_min=params.h0,
            gap_max=params.h0,
            mode=params.mode,
            config_hash=config.config_hash,
        )
    monitor = _SpreadingVanishingMonitor(config)
    trajectory = simulate(config, c0=c0, stop_condition=monitor, u0=u0)
    state = trajectory.final_state
    if monitor.rule == 'critical-length':
        verdict = SPREADING
    elif monitor.rule == 'decay':
        verdict = VANISHING
    else:
        verdict = UNDETERMINED
    certificate = None
    if monitor.rule:
        certificate = Certificate(
            rule=monitor.rule, time=state.t, detail=monitor.detail
        )
    gap_min, gap_max = trajectory.gap_bounds()
    logging.info(
        'sigma=%g: %s at t=%g (h=%g, sup u=%.3e)',
        amplitude,
        verdict,
        state.t,
        state.h,
        state.sup_u,
    )
    return Classification(
        verdict=verdict,
        certificate=certificate,
        sigma=amplitude,
        final_time=state.t,
        final_h=state.h,
        final_sup_u=state.sup_u,
        critical_length=length,
        gap_min=gap_min,
        gap_max=gap_max,
        mode=params.mode,
        config_hash=config.config_hash,
    )


def classification_record(classification):
    """
    Returns the JSON-lines record of a classification:
    {config_hash, verdict, certificate, diagnostics}.
    """
    data = classification.model_dump(mode='json')
    return {
        'config_hash': data.pop('config_hash'),
        'verdict': data.pop('verdict'),
        'certificate': data.pop('certificate'),
        'diagnostics': data,
    }


def _check_threshold_applies(config):
    length = critical_length(config.params)
    if config.h0 >= length:
        raise PreconditionError(
            f'h0={config.h0:g} >= pi/2 sqrt(d/a)={length:g}: vanishing '
            f'cannot happen, so there is no amplitude threshold'
        )


def find_sigma_star(config, bracket=None, rel_tol=None, t_max=None):
    """
    Locates the sharp amplitude threshold sigma* separating vanishing from
    spreading for the configured initial shape by bisection.

    If both bracket ends vanish the upper end is doubled up to sigma_cap,
    and "possibly-infinite" is reported when no spreading amplitude is found.
    An Undetermined verdict halts the search with the partial bracket.

    Parameters
    ----------
    config : climate_front.lab_config.LabConfig
        Run configuration.
    bracket : tuple of float, optional
        Initial (sigma_lo, sigma_hi), config values by default.
    rel_tol : float, optional
        Final bracket width relative to sigma_hi, config.sigma_rel_tol by
        default.
    t_max : float, optional
        Time horizon of every classification run.

    Returns
    -------
    climate_front.models.SigmaStarReport

    Raises
    ------
    climate_front.errors.PreconditionError
        If h0 >= pi/2 sqrt(d/a).
    climate_front.errors.BracketError
        If both bracket ends spread.
    climate_front.errors.MonotonicityError
        If the lower end spreads while the upper end vanishes.
    """
    _check_threshold_applies(config)
    lo, hi = bracket or (config.sigma_lo, config.sigma_hi)
    rel_tol = rel_tol or config.sigma_rel_tol
    if not 0 < lo < hi:
        raise PreconditionError(f'invalid sigma bracket [{lo}, {hi}]')
    evaluations = []

    def verdict(sigma):
        result = classify_run(config, t_max=t_max, sigma=sigma).verdict
        evaluations.append(SigmaEvaluation(sigma=sigma, verdict=result))
        return result

    def report(status, message=''):
        return SigmaStarReport(
            status=status,
            sigma_lo=lo,
            sigma_hi=hi,
            evaluations=evaluations,
            message=message,
        )

    lo_verdict = verdict(lo)
    hi_verdict = verdict(hi)
    if UNDETERMINED in (lo_verdict, hi_verdict):
        return report('undetermined', 'a bracket end is undetermined')
    if lo_verdict == SPREADING and hi_verdict == SPREADING:
        raise BracketError(
            f'both sigma={lo:g} and sigma={hi:g} spread, lower the bracket',
            table=[(e.sigma, e.verdict) for e in evaluations],
        )
    if lo_verdict == SPREADING:
        raise MonotonicityError(
            f'sigma={lo:g} spreads while sigma={hi:g} vanishes',
            pair=(lo, hi),
        )
    while hi_verdict == VANISHING:
        if hi >= config.sigma_cap:
            return report(
                'possibly-infinite',
                f'no spreading amplitude found up to sigma={hi:g}',
            )
        lo, hi = hi, min(2.0 * hi, config.sigma_cap)
        hi_verdict = verdict(hi)
        if hi_verdict == UNDETERMINED:
            return report('undetermined', f'sigma={hi:g} is undetermined')
    while hi - lo > rel_tol * hi:
        middle = 0.5 * (lo + hi)
        middle_verdict = verdict(middle)
        logging.debug('sigma=%g: %s', middle, middle_verdict)
        if middle_verdict == UNDETERMINED:
            return report(
                'undetermined', f'sigma={middle:g} is undetermined'
            )
        if middle_verdict == VANISHING:
            lo = middle
        else:
            hi = middle
    logging.info('sigma* in [%.6g, %.6g]', lo, hi)
    return report('bracketed')


def verdict_monotonicity_audit(config, sigmas, t_max=None, threads=None):
    """
    Classifies runs over an amplitude grid and checks that verdicts are
    sorted: no Vanishing above a Spreading amplitude.

    Parameters
    ----------
    config : climate_front.lab_config.LabConfig
        Run configuration.
    sigmas : list of float
        Amplitudes.
    t_max : float, optional
        Time horizon of every run.
    threads : int, optional
        Pool size, config.threads by default.

    Returns
    -------
    climate_front.models.MonotonicityAudit
    """
    sigmas = sorted(float(sigma) for sigma in sigmas)
    results = ordered_map(
        lambda sigma: classify_run(config, t_max=t_max, sigma=sigma),
        sigmas,
        max_workers=threads or config.threads,
    )
    evaluations = [
        SigmaEvaluation(sigma=sigma, verdict=result.verdict)
        for sigma, result in zip(sigmas, results)
    ]
    spreading_seen = None
    for evaluation in evaluations:
        if evaluation.verdict == SPREADING and spreading_seen is None:
            spreading_seen = evaluation.sigma
        elif evaluation.verdict == VANISHING and spreading_seen is not None:
            return MonotonicityAudit(
                evaluations=evaluations,
                passed=False,
                offending_pair=(spreading_seen, evaluation.sigma),
            )
    return MonotonicityAudit(evaluations=evaluations, passed=True)


def determine_regime(c, c0):
    """
    Compares the climate speed with the critical speed.

    Returns
    -------
    str
        "c<c0", "c=c0" (within 1e-8 relative) or "c>c0".
    """
    if abs(c - c0) <= CRITICAL_SPEED_MATCH * c0:
        return 'c=c0'
    return 'c<c0' if c < c0 else 'c>c0'


def asymptotic_report(
    trajectory, regime, params, c0, gap_window=0.1, sign_tol=1e-2
):
    """
    Estimates the limiting front gap of a spreading run: h - ct for c < c0,
    h - c0 t otherwise, averaged over the trailing `gap_window` fraction of
    the run, with the tail oscillation (max - min over the same window).

    For c = c0 the limit must not be positive, the estimate is checked
    against `sign_tol`.

    Parameters
    ----------
    trajectory : climate_front.solvers.stefan.Trajectory
        Spreading run.
    regime : str
        "c<c0", "c=c0" or "c>c0", see `determine_regime`.
    params : climate_front.models.ModelParams
        Problem constants.
    c0 : float
        Critical speed.
    gap_window : float, optional
        Trailing window fraction.
    sign_tol : float, optional
        Tolerance of the c = c0 sign check.

    Returns
    -------
    climate_front.models.AsymptoticReport

    Raises
    ------
    climate_front.errors.NotSpreadingError
        If the front never reached the critical length.
    """
    if regime not in ('c<c0', 'c=c0', 'c>c0'):
        raise PreconditionError(f'unknown regime "{regime}"')
    length = critical_length(params)
    if not float(np.max(trajectory.h)) >= length:
        raise NotSpreadingError(
            f'front stayed below the critical length {length:g}'
        )
    times = trajectory.times
    if regime == 'c<c0':
        gap_kind = 'h_minus_ct'
        gap = trajectory.h - params.c * times
    else:
        gap_kind = 'h_minus_c0t'
        gap = trajectory.h - c0 * times
    start = (1.0 - gap_window) * times[-1]
    tail = gap[times >= start]
    estimate = float(np.mean(tail))
    sign_check = None
    if regime == 'c=c0':
        sign_check = estimate <= sign_tol
    return AsymptoticReport(
        regime=regime,
        c=params.c,
        c0=c0,
        gap_kind=gap_kind,
        gap_estimate=estimate,
        oscillation=float(np.max(tail) - np.min(tail)),
        window_start=start,
        samples=int(tail.size),
        sign_check_passed=sign_check,
    )


def _sweep_cell(config, row_name, row_value, col_name, col_value, t_max):
    cell_config = config.override(**{row_name: row_value, col_name: col_value})
    return cell_config, classify_run(cell_config, t_max=t_max)


def phase_sweep(
    config,
    row_name,
    row_values,
    col_name,
    col_values,
    t_max=None,
    threads=None,
    out_dir=None,
):
    """
    Classifies every cell of a two-parameter grid concurrently.

    Parameters
    ----------
    config : climate_front.lab_config.LabConfig
        Configuration template.
    row_name, col_name : str
        Swept keys, "c", "sigma" or "h0".
    row_values, col_values : list of float
        Grid values.
    t_max : float, optional
        Time horizon of every run.
    threads : int, optional
        Pool size, config.threads by default.
    out_dir : str, optional
        Directory for phase.jsonl and phase.csv.

    Returns
    -------
    list of climate_front.models.PhaseCell
        Cells ordered by (row, col), failed cells carry the error message.
    """
    for name in (row_name, col_name):
        if name not in SWEEP_AXES:
            raise PreconditionError(
                f'unknown sweep axis "{name}", expected one of '
                f'{", ".join(SWEEP_AXES)}'
            )
    if row_name == col_name:
        raise PreconditionError('sweep axes must differ')
    grid = [
        (row, col, float(row_value), float(col_value))
        for row, row_value in enumerate(row_values)
        for col, col_value in enumerate(col_values)
    ]
    results = ordered_map(
        lambda item: _sweep_cell(
            config, row_name, item[2], col_name, item[3], t_max
        ),
        grid,
        max_workers=threads or config.threads,
        return_exceptions=True,
    )
    cells = []
    records = []
    for (row, col, row_value, col_value), result in zip(grid, results):
        cell = PhaseCell(
            row=row,
            col=col,
            row_name=row_name,
            row_value=row_value,
            col_name=col_name,
            col_value=col_value,
        )
        if isinstance(result, Exception):
            logging.error(
                'sweep cell %s=%g, %s=%g failed: %s',
                row_name,
                row_value,
                col_name,
                col_value,
                result,
            )
            cell.error = f'{type(result).__name__}: {result}'
        else:
            cell_config, classification = result
            cell.verdict = classification.verdict
            cell.final_h = classification.final_h
            cell.config_hash = cell_config.config_hash
            record = classification_record(classification)
            record.update(row=row, col=col)
            records.append(record)
        cells.append(cell)
    if out_dir:
        header = {'config_hash': config.config_hash}
        write_jsonl(os.path.join(out_dir, 'phase.jsonl'), records, header)
        write_table(
            os.path.join(out_dir, 'phase.csv'),
            ['row', 'col', row_name, col_name, 'verdict_code', 'final_h'],
            [
                [
                    cell.row,
                    cell.col,
                    cell.row_value,
                    cell.col_value,
                    _VERDICT_CODES.get(cell.verdict, math.nan),
                    math.nan if cell.final_h is None else cell.final_h,
                ]
                for cell in cells
            ],
            header=header,
        )
    return cells
