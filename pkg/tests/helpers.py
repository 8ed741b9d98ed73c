"""Builders shared across test modules."""

import numpy as np

from heavinet import ConstantInput, NetworkConfig


def make_config(n, T, s0, dt=1.0 / 500.0, tau_d=1.0, b=0.1):
    return NetworkConfig(
        n=n, T=T, tau_d=tau_d, dt=dt, s0=np.asarray(s0, dtype=float),
        inputs=tuple(ConstantInput(b) for _ in range(n)),
    )


def seeded_state(seed, n):
    """The package-wide convention: uniform [0,1) draw from a Philox stream
    keyed by (seed, 0)."""
    key = np.array([seed, 0], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key)).uniform(0.0, 1.0, n)
