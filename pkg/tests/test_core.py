import math

import numpy as np
import pytest

from heavinet import (
    ConfigError,
    ConnectivityMatrix,
    ConstantInput,
    FiringSchedule,
    NetworkConfig,
    PiecewiseConstantInput,
    TabulatedInput,
    connectivity_grid,
    generate_nonsymmetric_connectivity,
    generate_symmetric_connectivity,
)

from helpers import make_config


def test_connectivity_grid():
    assert np.allclose(connectivity_grid(1), [-0.5])
    assert np.allclose(connectivity_grid(5), [-0.5, -0.25, 0.0, 0.25, 0.5])
    g = connectivity_grid(100)
    assert g[0] == -0.5 and g[-1] == 0.5
    assert np.allclose(np.diff(g), 1.0 / 99.0)


def test_symmetric_connectivity_values():
    w = generate_symmetric_connectivity(5).w
    assert np.allclose(w, w.T)
    # diagonal: distance 0
    assert w[0, 0] == pytest.approx(-25.0 * (1.0 + math.tanh(2.0)))
    # one grid step: |x - y| = 0.25
    assert w[0, 1] == pytest.approx(-25.0 * (1.0 + math.tanh(2.0 - 5.0)))
    # full width: essentially zero
    assert abs(w[0, 4]) < 1e-13
    assert np.all(w <= 0.0)
    assert np.all(w > -50.0)


def test_nonsymmetric_connectivity_branches():
    w = generate_nonsymmetric_connectivity(5).w
    peak = 25.0 * (1.0 + math.tanh(2.0))
    # x < y reuses the symmetric profile
    assert w[0, 1] == pytest.approx(-25.0 * (1.0 + math.tanh(2.0 - 5.0)))
    # x = y sits at the bottom of the ramp
    assert w[2, 2] == pytest.approx(-peak)
    # 0 <= x - y < 0.49 ramps linearly toward zero
    assert w[2, 1] == pytest.approx(peak * (100.0 / 49.0 * 0.25 - 1.0))
    # at and beyond x - y = 0.49 the coupling vanishes
    assert w[2, 0] == 0.0
    assert w[4, 0] == 0.0


def test_nonsymmetric_matches_symmetric_below_diagonal():
    ws = generate_symmetric_connectivity(8).w
    wn = generate_nonsymmetric_connectivity(8).w
    iu = np.triu_indices(8, k=1)  # i < j means x_i < y_j
    assert np.allclose(wn[iu], ws[iu])


def test_connectivity_matrix_validation():
    with pytest.raises(ConfigError):
        ConnectivityMatrix(np.zeros((2, 3)))
    with pytest.raises(ConfigError):
        ConnectivityMatrix(np.array([[0.0, np.nan], [0.0, 0.0]]))
    m = ConnectivityMatrix(np.eye(3))
    assert m.n == 3
    assert np.allclose(m.row(1), [0.0, 1.0, 0.0])


def test_network_config_validation():
    with pytest.raises(ConfigError):
        make_config(2, -1.0, [0.5, 0.5])
    with pytest.raises(ConfigError):
        make_config(2, 10.0, [0.5, -0.5])
    with pytest.raises(ConfigError):
        make_config(2, 10.0, [0.5, 0.5, 0.5])
    with pytest.raises(ConfigError):
        NetworkConfig(n=2, T=10.0, tau_d=1.0, dt=0.002, s0=np.array([0.5, 0.5]),
                      inputs=(ConstantInput(0.1),))


def test_delay_steps():
    cfg = make_config(1, 10.0, [0.5], dt=1.0 / 500.0)
    assert cfg.delay_steps == 500
    bad = make_config(1, 10.0, [0.5], dt=0.3)
    with pytest.raises(ConfigError):
        bad.delay_steps


def test_inputs():
    c = ConstantInput(0.1)
    assert c.at(3.0) == 0.1
    assert np.allclose(c.at_many(np.array([0.0, 1.0])), 0.1)
    assert c.breakpoints_in(0.0, 10.0) == ()

    p = PiecewiseConstantInput(breakpoints=(0.0, 1.0, 2.0), values=(0.0, 1.0, 0.5))
    assert p.at(0.5) == 0.0
    assert p.at(1.0) == 1.0  # right-continuous at the jump
    assert p.at(1.5) == 1.0
    assert p.at(2.5) == 0.5
    assert p.breakpoints_in(0.0, 10.0) == (1.0, 2.0)
    with pytest.raises(ConfigError):
        PiecewiseConstantInput(breakpoints=(1.0, 2.0), values=(0.0, 1.0))

    t = TabulatedInput(times=(0.0, 1.0, 2.0), values=(0.0, 2.0, 0.0),
                       interpolation="linear")
    assert t.at(0.5) == pytest.approx(1.0)
    h = TabulatedInput(times=(0.0, 1.0, 2.0), values=(0.0, 2.0, 0.0))
    assert h.at(0.5) == 0.0  # hold is the default


def test_firing_schedule_validation():
    FiringSchedule(n=1, horizon=10.0, intervals=(((0.0, 1.0), (2.0, 3.0)),))
    with pytest.raises(ConfigError):
        FiringSchedule(n=1, horizon=10.0, intervals=(((0.0, 2.0), (1.0, 3.0)),))
    with pytest.raises(ConfigError):
        FiringSchedule(n=1, horizon=10.0, intervals=(((0.0, 11.0),),))
    with pytest.raises(ConfigError):
        FiringSchedule(n=2, horizon=10.0, intervals=(((0.0, 1.0),),))


def test_firing_schedule_accessors():
    s = FiringSchedule(
        n=3, horizon=10.0,
        intervals=(((1.0, 2.0), (4.0, 4.5)), (), ((3.0, 3.0),)),
    )
    assert s.gamma == (0, 2)
    assert np.array_equal(s.counts(), [2, 0, 1])
    assert np.allclose(s.onsets(0), [1.0, 4.0])
    assert np.allclose(s.durations(0), [1.0, 0.5])
    assert s.onsets(1).size == 0
    assert np.allclose(sorted(s.pooled_durations()), [0.0, 0.5, 1.0])
    t = s.truncated(1)
    assert np.array_equal(t.counts(), [1, 0, 1])
    assert t.intervals[0] == ((1.0, 2.0),)
