# -*- mode:python; coding:utf-8; -*-
# created: 2026-10-17

"""
Problem instance validation.
"""

import math

import numpy as np

from climate_front.constants import DERIVATIVE_RTOL
from climate_front.environment.climate import eval_mu
from climate_front.models import ValidationReport, Violation

__all__ = ['validate']


def _check_params(params):
    violations = []
    if params.relaxed:
        if params.a0 > params.a:
            violations.append(
                Violation(
                    code='relaxed-order',
                    message=(
                        f'relaxed mode requires a0 <= a, got a0={params.a0}, '
                        f'a={params.a}'
                    ),
                )
            )
    elif not params.a0 < 0 < params.a:
        violations.append(
            Violation(
                code='strict-sign',
                message=(
                    f'requires a0 < 0 < a, got a0={params.a0}, a={params.a}'
                ),
            )
        )
    return violations


def _check_profile(params, profile):
    mismatched = [
        name
        for name in ('a', 'a0', 'l0')
        if not math.isclose(getattr(params, name), getattr(profile, name))
    ]
    if mismatched:
        return [
            Violation(
                code='profile-mismatch',
                message='climate profile disagrees with parameters on '
                + ', '.join(mismatched),
            )
        ]
    return []


def _check_mu(params, mu):
    violations = []
    if not (
        math.isclose(mu.a0, params.a0) and math.isclose(mu.a, params.a)
    ):
        violations.append(
            Violation(
                code='mu-range',
                message='expansion rate is not defined over [a0, a]',
            )
        )
    mu_lo = eval_mu(mu, mu.a0)
    mu_hi = eval_mu(mu, mu.a)
    if not 0 < mu_lo <= mu_hi:
        violations.append(
            Violation(
                code='mu-order',
                message=f'requires 0 < mu(a0) <= mu(a), got {mu_lo}, {mu_hi}',
            )
        )
    return violations


def _check_initial_data(params, u0):
    violations = []
    values = u0.values
    scale = float(np.max(np.abs(values)))
    if not math.isclose(u0.h0, params.h0):
        violations.append(
            Violation(
                code='h0-mismatch',
                message=f'initial data length {u0.h0} differs from h0 '
                f'{params.h0}',
            )
        )
    if not np.all(np.isfinite(values)):
        violations.append(
            Violation(code='u0-finite', message='u0 has non-finite values')
        )
        return violations
    if abs(values[-1]) > 1e-12 * max(scale, 1.0):
        violations.append(
            Violation(
                code='u0-boundary',
                message=f'u0(h0) ≠ 0, got {values[-1]}',
                location=u0.h0,
            )
        )
    non_positive = np.flatnonzero(values[:-1] <= 0)
    if non_positive.size:
        violations.append(
            Violation(
                code='u0-positive',
                message='u0 must be positive on [0, h0)',
                location=float(u0.grid[non_positive[0]]),
            )
        )
    dx = u0.dx
    tolerance = DERIVATIVE_RTOL * scale / u0.h0
    slope_left = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2 * dx)
    slope_right = (3.0 * values[-1] - 4.0 * values[-2] + values[-3]) / (
        2 * dx
    )
    if abs(slope_left) > tolerance:
        violations.append(
            Violation(
                code='u0-no-flux',
                message=f"u0'(0) ≠ 0, got {slope_left:.3e}",
                location=0.0,
            )
        )
    if not slope_right < -tolerance:
        violations.append(
            Violation(
                code='u0-front-slope',
                message=f"u0'(h0) must be negative, got {slope_right:.3e}",
                location=u0.h0,
            )
        )
    return violations


def validate(params, profile, mu, u0):
    """
    Checks a problem instance against the model assumptions.

    Parameters
    ----------
    params : climate_front.models.ModelParams
        Problem constants.
    profile : climate_front.models.ClimateProfile
        Climate profile.
    mu : climate_front.models.ExpansionRate
        Expansion rate.
    u0 : climate_front.environment.initial_data.InitialData
        Initial density.

    Returns
    -------
    climate_front.models.ValidationReport
        Report listing every violated condition, empty when the instance
        is valid.
    """
    violations = []
    violations.extend(_check_params(params))
    violations.extend(_check_profile(params, profile))
    violations.extend(_check_mu(params, mu))
    violations.extend(_check_initial_data(params, u0))
    return ValidationReport(mode=params.mode, violations=violations)
