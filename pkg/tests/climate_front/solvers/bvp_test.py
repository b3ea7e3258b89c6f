import math
from unittest import mock

import numpy as np
import pytest

from climate_front.analysis.oracles import oracle_bvp, oracle_right_slope
from climate_front.environment.initial_data import make_initial_bump
from climate_front.errors import (
    ConvergenceError,
    PreconditionError,
    TrivialBranchError,
)
from climate_front.models import BvpSpec
from climate_front.solvers import bvp
from climate_front.solvers.bvp import (
    Profile,
    auxiliary_front_speeds,
    derivative_at_right,
    left_truncation_radius,
    logistic_upper_bound,
    psi_spec,
    semiwave_spec,
    solve_logistic_bvp,
    u_spec,
    w_spec,
)
from climate_front.solvers.forced_semiwave import (
    find_L0,
    solve_forced_semiwave,
)
from climate_front.utils.file_utils import read_header, read_table


def test_constant_solution_needs_no_iterations():
    spec = BvpSpec(
        xl=-5.0,
        xr=0.0,
        left_value=1.0,
        right_value=1.0,
        drift=0.5,
        d=1.0,
        b=1.0,
        kappa=1.0,
    )
    profile = solve_logistic_bvp(spec, n=64)
    assert profile.iterations == 0
    assert profile.residual == 0.0
    np.testing.assert_array_equal(profile.values, 1.0)


def test_semiwave_profile(reference_params):
    spec = semiwave_spec(reference_params, 0.5, 20.0)
    profile = solve_logistic_bvp(spec, dx=0.02)
    assert profile.branch == 'positive'
    assert profile.residual <= 1e-9
    assert profile.values[0] == 1.0
    assert profile.values[-1] == 0.0
    assert np.all(profile.values >= 0.0)
    assert np.all(profile.values <= 1.0 + 1e-9)
    assert derivative_at_right(profile) < 0


def test_slow_semiwave_matches_first_integral(reference_params):
    spec = semiwave_spec(reference_params, 1e-3, 20.0)
    profile = solve_logistic_bvp(spec, dx=0.02)
    expected = -1.0 / math.sqrt(3.0)
    assert derivative_at_right(profile) == pytest.approx(expected, abs=5e-3)


def test_zero_data_on_short_interval(reference_params):
    spec = u_spec(reference_params, 1.0)
    with pytest.raises(TrivialBranchError):
        solve_logistic_bvp(spec, n=101)
    profile = solve_logistic_bvp(spec, n=101, allow_trivial=True)
    assert profile.branch == 'trivial'
    assert not np.any(profile.values)


def test_zero_data_on_long_interval(reference_params):
    profile = solve_logistic_bvp(u_spec(reference_params, 10.0), dx=0.02)
    assert profile.branch == 'positive'
    assert 0.5 < np.max(profile.values) <= 1.0 + 1e-9


def test_grid_is_anchored_at_right_end(reference_params):
    spec = semiwave_spec(reference_params, 0.5, 1.0)
    x = solve_logistic_bvp(spec, dx=0.1).grid
    assert x[-1] == 0.0
    assert x.size == 16
    assert x[0] == pytest.approx(-1.5)
    assert np.diff(x) == pytest.approx(0.1)


def test_grid_size_precondition(reference_params):
    with pytest.raises(PreconditionError):
        solve_logistic_bvp(semiwave_spec(reference_params, 0.5, 5.0), n=8)


def test_slope_needs_four_points():
    with pytest.raises(PreconditionError):
        derivative_at_right(Profile([0.0, 1.0, 2.0], [2.0, 1.0, 0.0]))
    profile = Profile([0.0, 1.0, 2.0, 3.0], [3.0, 2.0, 1.0, 0.0])
    assert derivative_at_right(profile) == pytest.approx(-1.0)


def test_stalled_newton_steps(reference_params):
    """solve_logistic_bvp checks the final residual against tol"""
    spec = semiwave_spec(reference_params, 0.5, 5.0)
    with mock.patch.object(
        bvp,
        'tridiagonal_solve',
        side_effect=lambda lower, diag, upper, rhs: np.zeros_like(rhs),
    ):
        with pytest.raises(ConvergenceError, match='stalled') as error:
            solve_logistic_bvp(spec, n=32)
    assert error.value.residual > 1e-9


def test_slope_converges_at_second_order(reference_params):
    spec = semiwave_spec(reference_params, 0.5, 20.0)
    exact = oracle_right_slope(oracle_bvp(spec))
    errors = [
        abs(derivative_at_right(solve_logistic_bvp(spec, dx=dx)) - exact)
        for dx in (0.1, 0.05, 0.025)
    ]
    assert errors[0] / errors[1] >= 3.0
    assert errors[1] / errors[2] >= 3.0


def test_left_loaded_problem_sandwich(reference_params, reference_climate):
    params = reference_params.model_copy(update={'c': 0.25})
    wave = solve_forced_semiwave(
        1.0, params, reference_climate, 0.25, c0=1.0, X=20.0, dx=0.02
    )
    psi = solve_logistic_bvp(
        psi_spec(params, reference_climate, 20.0, 1.0, 2.0), dx=0.02
    )
    np.testing.assert_allclose(psi.grid, wave.grid)
    assert np.all(wave.values <= psi.values + 1e-4)
    assert np.all(psi.values <= 2.0 + 1e-4)


def test_left_loaded_problem_forgets_left_value(
    reference_params, reference_climate
):
    params = reference_params.model_copy(update={'c': 0.25})
    wave = solve_forced_semiwave(
        1.0, params, reference_climate, 0.25, c0=1.0, X=40.0, dx=0.02
    )
    radius = 5.0
    distances = []
    for l in (radius, 2.0 * radius, 4.0 * radius):
        psi = solve_logistic_bvp(
            psi_spec(params, reference_climate, l, 1.0, 2.0), dx=0.02
        )
        window = psi.grid >= -radius - 1e-9
        difference = psi.values[window] - wave.interpolate(psi.grid[window])
        distances.append(float(np.max(np.abs(difference))))
    assert distances[0] >= distances[1] >= distances[2]
    assert distances[2] < 1e-3


def test_positive_solutions_stay_below_plateau(
    reference_params, reference_climate
):
    params = reference_params.model_copy(update={'c': 0.25})
    profiles = [
        solve_forced_semiwave(
            1.5, params, reference_climate, 0.25, c0=1.0, X=20.0, dx=0.02
        ).profile,
        solve_logistic_bvp(
            w_spec(params, reference_climate, 20.0, 2.0), dx=0.02
        ),
        solve_logistic_bvp(u_spec(params, 10.0), dx=0.02),
    ]
    for profile in profiles:
        inner = profile.values[1:-1]
        assert np.all(inner > 0.0)
        assert np.all(inner < params.plateau + 1e-8)


def test_truncation_radius(reference_params):
    radius = left_truncation_radius(reference_params, 0.5, 1e-6, dx=0.05)
    assert radius == 20.0
    with pytest.raises(PreconditionError):
        left_truncation_radius(reference_params, 0.0, 1e-6)


def test_upper_bound(reference_params):
    assert logistic_upper_bound(
        reference_params, make_initial_bump(2.0, 0.5)
    ) == 1.0
    assert logistic_upper_bound(
        reference_params, make_initial_bump(2.0, 3.0)
    ) == 3.0


def test_profile_csv(tmp_path, reference_params):
    profile = solve_logistic_bvp(
        semiwave_spec(reference_params, 0.5, 5.0), n=32
    )
    file_path = str(tmp_path / 'profile.csv')
    profile.to_csv(file_path, header={'c': 0.5})
    header = read_header(file_path)
    assert header['spec_hash'] == profile.metadata['spec_hash']
    assert header['branch'] == 'positive'
    assert header['c'] == '0.5'
    columns, data = read_table(file_path)
    assert columns == ['x', 'v']
    assert data.shape == (32, 2)


def test_front_speeds_without_lower_barrier(
    reference_params, reference_climate, reference_mu
):
    speeds = auxiliary_front_speeds(
        reference_params, reference_climate, reference_mu, 0.0, 10.0, dx=0.05
    )
    L1, upper = speeds['upper']
    assert L1 == 0.5
    assert upper > 0
    assert speeds['lower'] is None


@pytest.mark.slow
def test_front_speeds_bracket_climate_speed(
    reference_params, reference_climate, reference_mu
):
    params = reference_params.model_copy(update={'c': 0.1})
    L0 = find_L0(params, reference_climate, reference_mu, 0.1, dx=0.02)
    speeds = auxiliary_front_speeds(
        params, reference_climate, reference_mu, L0, 40.0, dx=0.02
    )
    assert speeds['upper'][1] < 0.1 < speeds['lower'][1]
