import math
import os
import types
import unittest
from unittest import mock

import numpy as np
import pytest

from climate_front.analysis import classify
from climate_front.analysis.classify import (
    SPREADING,
    UNDETERMINED,
    VANISHING,
    asymptotic_report,
    classification_record,
    classify_run,
    determine_regime,
    find_sigma_star,
    phase_sweep,
    verdict_monotonicity_audit,
)
from climate_front.errors import (
    BracketError,
    MonotonicityError,
    NotSpreadingError,
    PreconditionError,
    SolverError,
)
from climate_front.models import Classification
from climate_front.solvers.semiwave import critical_speed, solve_semiwave
from climate_front.solvers.stefan import Trajectory, profile_error, simulate
from climate_front.utils.file_utils import read_jsonl, read_table


def test_long_initial_range_spreads(desk_config):
    result = classify_run(desk_config)
    assert result.verdict == SPREADING
    assert result.certificate.rule == 'initial-range'
    assert result.final_time == 0.0
    assert result.critical_length == pytest.approx(0.5 * math.pi)
    assert result.config_hash == desk_config.config_hash


def test_front_reaches_critical_length(desk_config):
    config = desk_config.override(h0=1.4)
    result = classify_run(config, t_max=1.0)
    assert result.verdict == SPREADING
    assert result.certificate.rule == 'critical-length'
    assert result.final_h >= 0.5 * math.pi
    assert result.final_time < 1.0


def test_small_population_vanishes(desk_config):
    config = desk_config.override(h0=0.5, sigma=0.01, t_max=4.0)
    result = classify_run(config)
    assert result.verdict == VANISHING
    assert result.certificate.rule == 'decay'
    assert result.final_time == pytest.approx(1.0)
    assert result.final_h < 0.51
    assert result.sigma == 0.01


def test_short_horizon_is_undetermined(desk_config):
    result = classify_run(desk_config.override(h0=1.4), t_max=0.05)
    assert result.verdict == UNDETERMINED
    assert result.certificate is None
    assert result.final_time == pytest.approx(0.05)


def test_classification_record(desk_config):
    record = classification_record(classify_run(desk_config))
    assert sorted(record) == [
        'certificate',
        'config_hash',
        'diagnostics',
        'verdict',
    ]
    assert record['verdict'] == SPREADING
    assert record['certificate']['rule'] == 'initial-range'
    assert record['diagnostics']['final_h'] == 2.0


def test_regimes():
    assert determine_regime(0.5, 1.0) == 'c<c0'
    assert determine_regime(1.0, 1.0) == 'c=c0'
    assert determine_regime(1.0 + 1e-10, 1.0) == 'c=c0'
    assert determine_regime(1.5, 1.0) == 'c>c0'


def make_trajectory(times, h):
    rows = [
        [t, x, math.nan, math.nan, 1.0, -1.0, math.nan]
        for t, x in zip(times, h)
    ]
    return Trajectory(rows, None)


def test_gap_behind_climate(reference_params):
    times = np.linspace(0.0, 10.0, 11)
    trajectory = make_trajectory(times, 3.0 + 0.5 * times)
    report = asymptotic_report(trajectory, 'c<c0', reference_params, 1.0)
    assert report.gap_kind == 'h_minus_ct'
    assert report.gap_estimate == pytest.approx(3.0)
    assert report.oscillation == pytest.approx(0.0, abs=1e-12)
    assert report.samples == 2
    assert report.window_start == pytest.approx(9.0)
    assert report.sign_check_passed is None


def test_gap_at_critical_speed(reference_params):
    times = np.linspace(0.0, 10.0, 11)
    trajectory = make_trajectory(times, 1.0 * times - 0.5)
    report = asymptotic_report(
        trajectory, 'c=c0', reference_params, 1.0, gap_window=0.5
    )
    assert report.gap_kind == 'h_minus_c0t'
    assert report.gap_estimate == pytest.approx(-0.5)
    assert report.samples == 6
    assert report.sign_check_passed


def test_report_needs_spreading_run(reference_params):
    times = np.linspace(0.0, 10.0, 11)
    trajectory = make_trajectory(times, np.ones_like(times))
    with pytest.raises(NotSpreadingError):
        asymptotic_report(trajectory, 'c<c0', reference_params, 1.0)
    with pytest.raises(PreconditionError):
        asymptotic_report(trajectory, 'c<<c0', reference_params, 1.0)


def fake_classify(threshold=None, verdicts=None):
    def fake(config, t_max=None, sigma=None):
        if verdicts is not None:
            verdict = verdicts(sigma)
        else:
            verdict = SPREADING if sigma >= threshold else VANISHING
        return types.SimpleNamespace(verdict=verdict)

    return mock.patch.object(classify, 'classify_run', side_effect=fake)


class TestSigmaStar(unittest.TestCase):

    @pytest.fixture(autouse=True)
    def inject_config(self, desk_config):
        self.config = desk_config.override(h0=1.0)
        self.long_range = desk_config

    def test_bracketed(self):
        """find_sigma_star bisects down to the relative tolerance"""
        with fake_classify(threshold=0.3):
            report = find_sigma_star(self.config)
        self.assertEqual(report.status, 'bracketed')
        self.assertLess(report.sigma_lo, 0.3)
        self.assertGreaterEqual(report.sigma_hi, 0.3)
        self.assertLessEqual(report.width, 1e-2 * report.sigma_hi)
        self.assertEqual(report.evaluations[0].sigma, 1e-3)
        self.assertEqual(report.evaluations[1].sigma, 1.0)

    def test_upper_end_is_doubled(self):
        """find_sigma_star doubles the upper end while it vanishes"""
        with fake_classify(threshold=5.0):
            report = find_sigma_star(self.config, rel_tol=0.1)
        self.assertEqual(report.status, 'bracketed')
        self.assertTrue(4.0 <= report.sigma_lo < 5.0 <= report.sigma_hi)
        self.assertEqual(
            [e.sigma for e in report.evaluations[:5]],
            [1e-3, 1.0, 2.0, 4.0, 8.0],
        )

    def test_possibly_infinite(self):
        """find_sigma_star gives up at the amplitude cap"""
        with fake_classify(threshold=math.inf):
            report = find_sigma_star(self.config)
        self.assertEqual(report.status, 'possibly-infinite')
        self.assertEqual(report.sigma_hi, 1e3)

    def test_undetermined_end(self):
        """find_sigma_star stops on an undetermined verdict"""
        with fake_classify(verdicts=lambda sigma: UNDETERMINED):
            report = find_sigma_star(self.config)
        self.assertEqual(report.status, 'undetermined')
        self.assertEqual(len(report.evaluations), 2)

    def test_both_ends_spread(self):
        """find_sigma_star requires a vanishing lower end"""
        with fake_classify(threshold=0.0):
            with self.assertRaises(BracketError):
                find_sigma_star(self.config)

    def test_reversed_verdicts(self):
        """find_sigma_star rejects spreading below vanishing"""
        reversed_verdicts = fake_classify(
            verdicts=lambda sigma: SPREADING if sigma < 0.5 else VANISHING
        )
        with reversed_verdicts:
            with self.assertRaises(MonotonicityError):
                find_sigma_star(self.config)

    def test_long_initial_range(self):
        """find_sigma_star needs h0 below the critical length"""
        with self.assertRaises(PreconditionError):
            find_sigma_star(self.long_range)

    def test_audit(self):
        """verdict_monotonicity_audit reports a vanishing run above a
        spreading one"""
        with fake_classify(
            verdicts=lambda sigma: (
                SPREADING if sigma in (0.2, 0.8) else VANISHING
            )
        ):
            audit = verdict_monotonicity_audit(
                self.config, [0.8, 0.1, 0.4, 0.2], threads=2
            )
        self.assertFalse(audit.passed)
        self.assertEqual(audit.offending_pair, (0.2, 0.4))
        self.assertEqual(
            [e.sigma for e in audit.evaluations], [0.1, 0.2, 0.4, 0.8]
        )
        with fake_classify(threshold=0.3):
            audit = verdict_monotonicity_audit(
                self.config, [0.1, 0.2, 0.4, 0.8], threads=2
            )
        self.assertTrue(audit.passed)


def sweep_classify(config, t_max=None):
    if config.c > 1.0:
        raise SolverError('front speed is not finite')
    verdict = SPREADING if config.sigma >= 0.5 else VANISHING
    return Classification(
        verdict=verdict,
        sigma=config.sigma,
        final_time=1.0,
        final_h=config.h0 + config.sigma,
        final_sup_u=config.sigma,
        critical_length=0.5 * math.pi,
        config_hash=config.config_hash,
    )


def test_phase_sweep(desk_config, tmp_path):
    out_dir = str(tmp_path)
    with mock.patch.object(
        classify, 'classify_run', side_effect=sweep_classify
    ):
        cells = phase_sweep(
            desk_config, 'c', [0.5, 1.5], 'sigma', [0.1, 1.0], out_dir=out_dir
        )
    assert [(cell.row, cell.col) for cell in cells] == [
        (0, 0),
        (0, 1),
        (1, 0),
        (1, 1),
    ]
    assert [cell.verdict for cell in cells[:2]] == [VANISHING, SPREADING]
    assert cells[0].final_h == pytest.approx(2.1)
    assert all(cell.error.startswith('SolverError') for cell in cells[2:])
    assert cells[0].config_hash != cells[1].config_hash
    records = read_jsonl(os.path.join(out_dir, 'phase.jsonl'))
    assert [(r['row'], r['col']) for r in records] == [(0, 0), (0, 1)]
    columns, data = read_table(os.path.join(out_dir, 'phase.csv'))
    assert columns == ['row', 'col', 'c', 'sigma', 'verdict_code', 'final_h']
    np.testing.assert_array_equal(data[:, 4][:2], [0.0, 1.0])
    assert np.all(np.isnan(data[2:, 4]))


def test_sweep_axes(desk_config):
    with pytest.raises(PreconditionError):
        phase_sweep(desk_config, 'd', [1.0], 'c', [0.5])
    with pytest.raises(PreconditionError):
        phase_sweep(desk_config, 'c', [1.0], 'c', [0.5])


@pytest.mark.slow
def test_front_falls_behind_fast_climate(reference_config):
    c0 = critical_speed(reference_config.params, reference_config.mu, dx=0.01)
    t_max = 100.0 / c0
    config = reference_config.override(
        n_points=512, max_dx=0.025, t_max=t_max, sample_every=0.005 * t_max
    )
    trajectory = simulate(config, c0=c0)
    regime = determine_regime(config.c, c0)
    assert regime == 'c>c0'
    report = asymptotic_report(trajectory, regime, config.params, c0)
    assert report.gap_kind == 'h_minus_c0t'
    assert report.oscillation <= 1e-2
    wave = solve_semiwave(c0, config.params, X=40.0, dx=0.01)
    assert profile_error(trajectory.final_state, wave) <= 1e-2


@pytest.mark.slow
def test_front_keeps_pace_with_critical_climate(reference_config):
    c0 = critical_speed(reference_config.params, reference_config.mu, dx=0.01)
    t_max = 200.0 / c0
    config = reference_config.override(
        c=c0,
        n_points=512,
        max_dx=0.05,
        t_max=t_max,
        sample_every=0.005 * t_max,
    )
    trajectory = simulate(config, c0=c0)
    regime = determine_regime(config.c, c0)
    assert regime == 'c=c0'
    report = asymptotic_report(trajectory, regime, config.params, c0)
    assert report.sign_check_passed
    assert report.gap_estimate <= 1e-2
