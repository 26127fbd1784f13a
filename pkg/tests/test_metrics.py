import math

import pytest

from mcsim.metrics import (RunResult, UeStats, capacity_from_sweep, flr,
                           is_monotone_nonincreasing, mean_ci, satisfied,
                           satisfied_ratio)


def stats(gen, on_time, ue=0):
    return UeStats(ue, gen, on_time, gen - on_time)


def test_flr_arithmetic():
    assert stats(100, 98).flr == pytest.approx(0.02)
    assert stats(50, 50).flr == 0.0
    assert stats(10, 0).flr == 1.0


def test_flr_zero_frames_is_missing():
    assert stats(0, 0).flr is None


def test_satisfied_boundary_inclusive():
    # FLR exactly at the target still satisfies (shall not exceed).
    assert satisfied(stats(100, 99), 0.01) is True
    assert satisfied(stats(1000, 989), 0.01) is False


def run_with_flrs(flrs, point=1.0):
    ue_stats = [UeStats(i, 1000, round(1000 * (1 - f)), 1000 - round(1000 * (1 - f)))
                for i, f in enumerate(flrs)]
    return RunResult("multi_ue_capacity_sweep", "dbtb", point, 1, ue_stats,
                     0.1, 0.1)


def test_satisfied_ratio():
    run = run_with_flrs([0.005, 0.02, 0.0])
    assert satisfied_ratio(run, 0.01) == pytest.approx(2 / 3)
    assert satisfied_ratio(run_with_flrs([0.0, 0.0]), 0.01) == 1.0


def test_overall_flr_aggregates_frames_not_averages():
    a = UeStats(0, 100, 100, 0)
    b = UeStats(1, 300, 270, 30)
    run = RunResult("s", "p", 1.0, 1, [a, b], 0.0, 0.0)
    # (0 + 30) / 400, not the mean of 0.0 and 0.1
    assert run.overall_flr() == pytest.approx(30 / 400)


def test_capacity_examples():
    assert capacity_from_sweep([(1, 1.0), (2, 1.0), (3, 0.95), (4, 0.85)]) == 3
    assert capacity_from_sweep([(1, 0.9), (2, 0.8)]) == 0  # needs strictly > 0.9
    assert capacity_from_sweep([(1, 1.0), (2, 0.8), (3, 0.95)]) == 3  # literal max


def test_capacity_requires_contiguous_counts():
    with pytest.raises(ValueError):
        capacity_from_sweep([(2, 1.0), (3, 1.0)])


def test_monotone_helper():
    assert is_monotone_nonincreasing([1.0, 0.9, 0.9, 0.2])
    assert not is_monotone_nonincreasing([1.0, 0.8, 0.95])


def test_mean_ci_against_t_table():
    values = [1.0, 2.0, 3.0, 4.0, 5.0]
    mean, ci = mean_ci(values)
    assert mean == pytest.approx(3.0)
    # t(0.975, df=4) = 2.776, s = sqrt(2.5), n = 5
    assert ci == pytest.approx(2.776 * math.sqrt(2.5 / 5), rel=1e-3)


def test_mean_ci_single_value():
    mean, ci = mean_ci([2.5])
    assert mean == 2.5
    assert math.isnan(ci)
