import math

import numpy as np
import pytest

from heavinet import FiringSchedule, build_drive, evaluate_drive


def summed_form(s0, intervals, t):
    """Independent oracle: s(t) = s0 e^{-t} + sum over firing intervals of
    the convolution integral int_a^min(b,t) e^{-(t-u)} du."""
    acc = s0 * math.exp(-t)
    for a, b in intervals:
        if t <= a:
            continue
        hi = min(b, t)
        acc += math.exp(-t) * (math.exp(hi) - math.exp(a))
    return acc


@pytest.fixture
def schedule():
    return FiringSchedule(
        n=2, horizon=10.0,
        intervals=(((1.0, 2.5), (4.0, 6.0)), ()),
    )


def test_matches_summed_form_oracle(schedule):
    drive = build_drive(schedule, [0.7, 0.3], tau_d=1.0)
    ts = np.linspace(0.0, 10.0, 401)
    expected = [summed_form(0.7, schedule.intervals[0], t) for t in ts]
    assert np.allclose(drive.values(0, ts), expected, atol=1e-12)
    # silent neuron just decays
    assert np.allclose(drive.values(1, ts), 0.3 * np.exp(-ts), atol=1e-14)


def test_history_extends_backward(schedule):
    # on (-tau_d, 0] the state is s0 e^{-t}, growing toward the past
    drive = build_drive(schedule, [0.7, 0.3], tau_d=1.0)
    assert drive.value(0, -0.5) == pytest.approx(0.7 * math.exp(0.5))
    assert drive.value(1, 0.0) == pytest.approx(0.3)


def test_zero_length_interval_contributes_nothing():
    sched = FiringSchedule(n=1, horizon=5.0, intervals=(((2.0, 2.0),),))
    drive = build_drive(sched, [0.4], tau_d=1.0)
    ts = np.linspace(0.0, 5.0, 101)
    assert np.allclose(drive.values(0, ts), 0.4 * np.exp(-ts), atol=1e-14)


def test_saturation_toward_one():
    sched = FiringSchedule(n=1, horizon=50.0, intervals=(((0.0, 50.0),),))
    drive = build_drive(sched, [0.2], tau_d=1.0)
    # while firing: s(t) = 1 + (s0 - 1) e^{-t}
    assert drive.value(0, 3.0) == pytest.approx(1.0 - 0.8 * math.exp(-3.0))
    assert drive.value(0, 50.0) == pytest.approx(1.0, abs=1e-12)


def test_all_values_stacks_rows(schedule):
    drive = build_drive(schedule, [0.7, 0.3], tau_d=1.0)
    ts = np.array([0.5, 3.0, 7.0])
    m = drive.all_values(ts)
    assert m.shape == (2, 3)
    assert np.allclose(m[0], drive.values(0, ts))
    assert np.allclose(m[1], drive.values(1, ts))


def test_evaluate_drive_helper(schedule):
    drive = build_drive(schedule, [0.7, 0.3], tau_d=1.0)
    assert evaluate_drive(drive, 0, 2.0) == pytest.approx(drive.value(0, 2.0))
