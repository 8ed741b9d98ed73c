import numpy as np
import pytest

from heavinet import (
    extract_firing_schedule,
    generate_nonsymmetric_connectivity,
    simulate_exact,
)

from helpers import make_config, seeded_state


@pytest.fixture(scope="session")
def exact10():
    """Exact n=10 run with every neuron firing repeatedly; the workhorse
    clean-data fixture for inversion and diagnostics tests."""
    w = generate_nonsymmetric_connectivity(10)
    cfg = make_config(10, 120.0, seeded_state(0, 10))
    traj = simulate_exact(cfg, w)
    schedule = extract_firing_schedule(traj)
    assert schedule.counts().min() >= 10
    return cfg, w, traj, schedule


@pytest.fixture(scope="session")
def tables20(tmp_path_factory):
    """One run of the n=20 reference tables, shared by the experiment tests
    and the acceptance checks (the n=100 tier has its own slow fixture)."""
    import time

    from heavinet.experiment import reproduce_tables

    out = tmp_path_factory.mktemp("tables20")
    t0 = time.perf_counter()
    cells = reproduce_tables(out, groups=("sym-20", "nonsym-20"))
    return cells, out, time.perf_counter() - t0
