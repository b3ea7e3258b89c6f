import threading

import pytest

from climate_front.utils.pool import ordered_map


def test_results_follow_items_order():
    assert ordered_map(lambda x: x * x, range(10), max_workers=3) == [
        x * x for x in range(10)
    ]


def test_work_is_spread_over_threads():
    names = ordered_map(
        lambda _: threading.current_thread().name, range(4), max_workers=2
    )
    assert len(names) == 4
    assert all(name != threading.main_thread().name for name in names)


def failing(item):
    if item in (3, 5):
        raise ValueError(str(item))
    return item


def test_first_error_in_items_order_is_raised():
    with pytest.raises(ValueError, match='^3$'):
        ordered_map(failing, range(8), max_workers=4)


def test_errors_in_place_of_results():
    results = ordered_map(failing, range(6), return_exceptions=True)
    assert results[:3] == [0, 1, 2]
    assert isinstance(results[3], ValueError)
    assert results[4] == 4
    assert isinstance(results[5], ValueError)
