import numpy as np
import pytest

from climate_front.environment.climate import (
    make_climate,
    make_expansion_rate,
)
from climate_front.environment.initial_data import (
    from_samples,
    make_initial_bump,
)
from climate_front.environment.validation import validate
from climate_front.models import ExpansionRate, ModelParams


def check(params, u0=None, profile=None, mu=None):
    if profile is None:
        profile = make_climate(params)
    if mu is None:
        mu = make_expansion_rate(params)
    if u0 is None:
        u0 = make_initial_bump(params.h0, 1.0)
    return validate(params, profile, mu, u0)


def test_reference_instance_is_valid(reference_params):
    report = check(reference_params)
    assert report.passed
    assert report.mode == 'strict'


def test_quadratic_family_is_valid(reference_params):
    u0 = make_initial_bump(reference_params.h0, 0.1, 'quadratic')
    assert check(reference_params, u0).passed


def test_strict_mode_needs_negative_a0(reference_params):
    params = reference_params.model_copy(update={'a0': 0.5})
    report = check(params)
    assert report.codes() == ['strict-sign']


def test_relaxed_mode(reference_params):
    params = reference_params.model_copy(update={'a0': 1.0, 'relaxed': True})
    report = check(params)
    assert report.passed
    assert report.mode == 'relaxed'
    params = reference_params.model_copy(update={'a0': 2.0, 'relaxed': True})
    assert 'relaxed-order' in check(params).codes()


def test_profile_and_rate_must_match(reference_params):
    other = ModelParams(d=1.0, a=2.0, a0=-1.0, b=1.0, c=0.5, h0=2.0)
    mu = ExpansionRate(a0=-2.0, a=1.0, mu0=1.0)
    report = check(reference_params, profile=make_climate(other), mu=mu)
    assert 'profile-mismatch' in report.codes()
    assert 'mu-range' in report.codes()


def test_initial_length_must_match(reference_params):
    u0 = make_initial_bump(3.0, 1.0)
    assert check(reference_params, u0).codes() == ['h0-mismatch']


def test_initial_boundary_conditions(reference_params):
    x = np.linspace(0.0, 2.0, 201)
    shifted = from_samples(2.0, 1.1 - (x / 2.0) ** 2)
    assert 'u0-boundary' in check(reference_params, shifted).codes()
    linear = from_samples(2.0, 1.0 - x / 2.0)
    assert 'u0-no-flux' in check(reference_params, linear).codes()
    fine = np.linspace(0.0, 2.0, 2001)
    flat = from_samples(2.0, np.cos(0.25 * np.pi * fine) ** 2)
    assert 'u0-front-slope' in check(reference_params, flat).codes()


def test_initial_positivity(reference_params):
    x = np.linspace(0.0, 2.0, 201)
    values = np.cos(0.25 * np.pi * x)
    values[100] = 0.0
    report = check(reference_params, from_samples(2.0, values))
    assert 'u0-positive' in report.codes()
    assert report.violations[0].location == pytest.approx(1.0)


def test_non_finite_initial_data(reference_params):
    values = np.cos(np.linspace(0.0, 0.5 * np.pi, 11))
    values[3] = np.nan
    report = check(reference_params, from_samples(2.0, values))
    assert report.codes() == ['u0-finite']
