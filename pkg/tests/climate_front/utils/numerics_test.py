import math

import numpy as np

from climate_front.utils import numerics


def test_tridiagonal_solve_symmetric():
    x = numerics.tridiagonal_solve(
        np.array([1.0, 1.0]),
        np.array([2.0, 2.0, 2.0]),
        np.array([1.0, 1.0]),
        np.array([4.0, 8.0, 8.0]),
    )
    np.testing.assert_allclose(x, [1.0, 2.0, 3.0])


def test_tridiagonal_solve_orientation():
    # [[5, 1, 0], [3, 6, 2], [0, 4, 7]] @ [1, -1, 2]
    x = numerics.tridiagonal_solve(
        np.array([3.0, 4.0]),
        np.array([5.0, 6.0, 7.0]),
        np.array([1.0, 2.0]),
        np.array([4.0, 1.0, 10.0]),
    )
    np.testing.assert_allclose(x, [1.0, -1.0, 2.0])


def test_right_slope_exact_on_quadratics():
    x = np.linspace(0.0, 1.0, 11)
    values = x**2 + 3.0 * x
    assert math.isclose(numerics.right_slope(values, 0.1), 5.0)


def test_observed_order():
    orders = numerics.observed_order([4e-2, 1e-2, 2.5e-3])
    np.testing.assert_allclose(orders, [2.0, 2.0])
    assert math.isclose(numerics.observed_order([8.0, 1.0], ratio=8)[0], 1)


def test_observed_order_zero_difference():
    assert math.isnan(numerics.observed_order([1e-3, 0.0])[0])
