import types
import unittest
from unittest import mock

import pytest

from climate_front.environment.climate import make_expansion_rate
from climate_front.errors import (
    BracketError,
    MonotonicityError,
    PreconditionError,
)
from climate_front.models import ModelParams
from climate_front.solvers import semiwave
from climate_front.solvers.semiwave import (
    critical_speed,
    first_integral_slope,
    semiwave_speed_function,
    solve_critical_speed,
    solve_semiwave,
)


@pytest.mark.parametrize('c', [0.0, 2.0, 3.0])
def test_speed_range(reference_params, c):
    with pytest.raises(PreconditionError):
        solve_semiwave(c, reference_params, X=20.0, dx=0.02)


def test_semiwave_is_decreasing(reference_params):
    wave = solve_semiwave(0.5, reference_params, X=20.0, dx=0.02)
    assert wave.is_decreasing()
    assert wave.slope0 < 0
    assert wave.interpolate(1.0) == 0.0
    assert wave.interpolate(-100.0) == 1.0


def test_slope_flattens_with_speed(reference_params):
    slopes = [
        solve_semiwave(c, reference_params, X=30.0, dx=0.02).slope0
        for c in (0.2, 0.8, 1.4)
    ]
    assert slopes[0] < slopes[1] < slopes[2] < 0


def test_slow_wave_slope(reference_params):
    wave = solve_semiwave(1e-3, reference_params, X=20.0, dx=0.02)
    expected = first_integral_slope(reference_params)
    assert wave.slope0 == pytest.approx(expected, abs=5e-3)


def test_speed_function(reference_params, reference_mu):
    wave = solve_semiwave(0.5, reference_params, X=20.0, dx=0.02)
    value = semiwave_speed_function(
        reference_params, reference_mu, 0.5, X=20.0, dx=0.02
    )
    assert value == pytest.approx(-wave.slope0 - 0.5)


def test_critical_speed(reference_params, reference_mu):
    result = solve_critical_speed(
        reference_params, reference_mu, dx=0.01, threads=2
    )
    assert 0 < result.c0 < 2.0
    assert result.residual <= 1e-9
    assert result.truncation_radius >= 20.0
    values = [sample.value for sample in result.scan]
    assert all(
        second < first for first, second in zip(values[:-1], values[1:])
    )


@pytest.mark.slow
def test_critical_speed_scaling():
    params = ModelParams(d=1.0, a=1.0, a0=-1.0, b=1.0, c=0.5, h0=2.0)
    quarter = params.model_copy(update={'d': 0.25})
    c0 = critical_speed(
        params, make_expansion_rate(params, mu0=1.0), dx=0.02
    )
    scaled = critical_speed(
        quarter, make_expansion_rate(quarter, mu0=0.25), dx=0.01
    )
    assert scaled == pytest.approx(0.5 * c0, rel=1e-7)


class TestCriticalSpeedSearch(unittest.TestCase):

    def setUp(self):
        semiwave._SPEED_CACHE.clear()
        self.params = ModelParams(
            d=1.0, a=1.0, a0=-1.0, b=1.0, c=0.5, h0=2.0
        )
        self.mu = make_expansion_rate(self.params, mu0=1.0)
        patcher = mock.patch.object(
            semiwave, 'left_truncation_radius', return_value=20.0
        )
        patcher.start()
        self.addCleanup(patcher.stop)

    def tearDown(self):
        semiwave._SPEED_CACHE.clear()

    def _patch_slope(self, slope):
        def fake(c, params, **kwargs):
            return types.SimpleNamespace(slope0=slope(c))

        patcher = mock.patch.object(
            semiwave, 'solve_semiwave', side_effect=fake
        )
        solver = patcher.start()
        self.addCleanup(patcher.stop)
        return solver

    def test_root(self):
        """solve_critical_speed brackets and refines the root of f"""
        self._patch_slope(lambda c: -(1.0 - 0.5 * c))
        result = solve_critical_speed(self.params, self.mu, threads=1)
        self.assertAlmostEqual(result.c0, 2.0 / 3.0, places=12)
        self.assertEqual(len(result.scan), 8)

    def test_results_are_cached(self):
        """solve_critical_speed reuses earlier results"""
        solver = self._patch_slope(lambda c: -(1.0 - 0.5 * c))
        first = solve_critical_speed(self.params, self.mu, threads=1)
        calls = solver.call_count
        second = solve_critical_speed(
            self.params.model_copy(update={'c': 0.1, 'a0': -3.0}),
            self.mu,
            threads=1,
        )
        self.assertEqual(solver.call_count, calls)
        self.assertEqual(first, second)
        self.assertIsNot(first, second)

    def test_increasing_speed_function(self):
        """solve_critical_speed rejects a non-decreasing f"""
        self._patch_slope(lambda c: -3.0 * c)
        with self.assertRaises(MonotonicityError) as context:
            solve_critical_speed(self.params, self.mu, threads=1)
        self.assertIsNotNone(context.exception.pair)

    def test_no_sign_change(self):
        """solve_critical_speed reports the scanned values without a root"""
        self._patch_slope(lambda c: -10.0)
        with self.assertRaises(BracketError) as context:
            solve_critical_speed(self.params, self.mu, threads=1)
        self.assertTrue(context.exception.table)
        self.assertTrue(all(value > 0 for _, value in context.exception.table))
