"""Domain types: connectivity, network configuration, inputs, schedules.

All equilibrium-free dynamics in this package share one normalization: the
membrane time constant is 1, the transmission delay is tau_d, and the firing
nonlinearity is the Heaviside step with Phi(0) = 1.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Sequence, Tuple, Union

import numpy as np

from .errors import ConfigError

__all__ = [
    "ConnectivityMatrix",
    "ConstantInput",
    "PiecewiseConstantInput",
    "TabulatedInput",
    "ExternalInput",
    "NetworkConfig",
    "FiringSchedule",
    "generate_symmetric_connectivity",
    "generate_nonsymmetric_connectivity",
    "connectivity_grid",
]


@dataclass(frozen=True)
class ConnectivityMatrix:
    """Square coupling matrix W; W[i, j] weighs neuron j's delayed state in
    neuron i's firing argument. Frozen after construction."""

    w: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.w, dtype=float)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ConfigError(f"connectivity must be square, got shape {w.shape}")
        if not np.all(np.isfinite(w)):
            raise ConfigError("connectivity entries must be finite")
        w = w.copy()
        w.flags.writeable = False
        object.__setattr__(self, "w", w)

    @property
    def n(self) -> int:
        return self.w.shape[0]

    def row(self, i: int) -> np.ndarray:
        return self.w[i]


@dataclass(frozen=True)
class ConstantInput:
    """Time-independent external input."""

    value: float

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ConfigError("input value must be finite")

    def at(self, t: float) -> float:
        return self.value

    def at_many(self, ts: np.ndarray) -> np.ndarray:
        return np.full(np.shape(ts), self.value, dtype=float)

    def breakpoints_in(self, lo: float, hi: float) -> Tuple[float, ...]:
        return ()


@dataclass(frozen=True)
class PiecewiseConstantInput:
    """Right-continuous step input: value[k] holds on [breakpoints[k], next).

    breakpoints must start at 0 and be strictly increasing; the last piece
    extends to infinity.
    """

    breakpoints: Tuple[float, ...]
    values: Tuple[float, ...]

    def __post_init__(self):
        bp = tuple(float(b) for b in self.breakpoints)
        vals = tuple(float(v) for v in self.values)
        if len(bp) != len(vals) or not bp:
            raise ConfigError("breakpoints and values must have equal nonzero length")
        if bp[0] != 0.0:
            raise ConfigError("first breakpoint must be 0")
        if any(b2 <= b1 for b1, b2 in zip(bp, bp[1:])):
            raise ConfigError("breakpoints must be strictly increasing")
        if not all(math.isfinite(v) for v in bp + vals):
            raise ConfigError("breakpoints and values must be finite")
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "values", vals)

    def at(self, t: float) -> float:
        if t < 0.0:
            return self.values[0]
        return self.values[bisect_right(self.breakpoints, t) - 1]

    def at_many(self, ts: np.ndarray) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        idx = np.searchsorted(self.breakpoints, ts, side="right") - 1
        idx = np.clip(idx, 0, len(self.values) - 1)
        return np.asarray(self.values, dtype=float)[idx]

    def breakpoints_in(self, lo: float, hi: float) -> Tuple[float, ...]:
        return tuple(b for b in self.breakpoints if lo < b < hi)


@dataclass(frozen=True)
class TabulatedInput:
    """Sampled input with hold or linear interpolation between samples."""

    times: Tuple[float, ...]
    values: Tuple[float, ...]
    interpolation: str = "hold"

    def __post_init__(self):
        ts = tuple(float(t) for t in self.times)
        vals = tuple(float(v) for v in self.values)
        if len(ts) != len(vals) or len(ts) < 1:
            raise ConfigError("times and values must have equal nonzero length")
        if any(t2 <= t1 for t1, t2 in zip(ts, ts[1:])):
            raise ConfigError("sample times must be strictly increasing")
        if self.interpolation not in ("hold", "linear"):
            raise ConfigError(f"unknown interpolation {self.interpolation!r}")
        if not all(math.isfinite(v) for v in ts + vals):
            raise ConfigError("sample times and values must be finite")
        object.__setattr__(self, "times", ts)
        object.__setattr__(self, "values", vals)

    def at(self, t: float) -> float:
        return float(self.at_many(np.array([t]))[0])

    def at_many(self, ts: np.ndarray) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        times = np.asarray(self.times)
        vals = np.asarray(self.values)
        if self.interpolation == "linear":
            return np.interp(ts, times, vals)
        idx = np.searchsorted(times, ts, side="right") - 1
        idx = np.clip(idx, 0, len(vals) - 1)
        return vals[idx]

    def breakpoints_in(self, lo: float, hi: float) -> Tuple[float, ...]:
        return tuple(t for t in self.times if lo < t < hi)


ExternalInput = Union[ConstantInput, PiecewiseConstantInput, TabulatedInput]


@dataclass(frozen=True)
class NetworkConfig:
    """Simulation setup: size, horizon, delay, Euler step, initial state,
    and one external input per neuron.

    s0 is the state at t = 0; on (-tau_d, 0] the history is s0 * e^{-t}.
    """

    n: int
    T: float
    tau_d: float
    dt: float
    s0: np.ndarray
    inputs: Tuple[ExternalInput, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ConfigError("n must be at least 1")
        if not (self.T > 0 and math.isfinite(self.T)):
            raise ConfigError("T must be positive and finite")
        if not (self.tau_d > 0 and math.isfinite(self.tau_d)):
            raise ConfigError("tau_d must be positive and finite")
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise ConfigError("dt must be positive and finite")
        s0 = np.asarray(self.s0, dtype=float)
        if s0.shape != (self.n,):
            raise ConfigError(f"s0 must have shape ({self.n},), got {s0.shape}")
        if not np.all(np.isfinite(s0)) or np.any(s0 < 0):
            raise ConfigError("s0 entries must be finite and nonnegative")
        s0 = s0.copy()
        s0.flags.writeable = False
        object.__setattr__(self, "s0", s0)
        if len(self.inputs) != self.n:
            raise ConfigError("need one external input per neuron")
        object.__setattr__(self, "inputs", tuple(self.inputs))

    @property
    def delay_steps(self) -> int:
        """tau_d in units of dt; raises unless the ratio is integral."""
        d = self.tau_d / self.dt
        d_int = int(round(d))
        if d_int < 1 or abs(d - d_int) > 1e-9 * max(1.0, d):
            raise ConfigError(
                f"tau_d/dt = {d!r} must be a positive integer for grid stepping"
            )
        return d_int


@dataclass(frozen=True)
class FiringSchedule:
    """Per-neuron firing intervals inside (0, T].

    intervals[i] is a tuple of (start, end) pairs with 0 <= start <= end <= T,
    strictly increasing and pairwise disjoint. Zero-length intervals (grazing
    touches of the firing threshold) are permitted. A start at exactly 0 can
    occur for trajectories that fire from the first instant or for perturbed
    onsets clipped to the horizon; downstream consumers that need interior
    onsets skip those rows.
    """

    n: int
    horizon: float
    intervals: Tuple[Tuple[Tuple[float, float], ...], ...]

    def __post_init__(self):
        if len(self.intervals) != self.n:
            raise ConfigError("need one interval list per neuron")
        norm = []
        for i, per in enumerate(self.intervals):
            per = tuple((float(a), float(b)) for a, b in per)
            prev_end = -math.inf
            for a, b in per:
                if not (0.0 <= a <= b <= self.horizon):
                    raise ConfigError(
                        f"neuron {i}: interval [{a}, {b}] outside [0, {self.horizon}]"
                    )
                if a <= prev_end:
                    raise ConfigError(f"neuron {i}: intervals overlap or are unsorted")
                prev_end = b
            norm.append(per)
        object.__setattr__(self, "intervals", tuple(norm))

    @property
    def gamma(self) -> Tuple[int, ...]:
        """Indices of neurons that fire at least once."""
        return tuple(i for i, per in enumerate(self.intervals) if per)

    def counts(self) -> np.ndarray:
        return np.array([len(per) for per in self.intervals], dtype=int)

    def onsets(self, i: int) -> np.ndarray:
        return np.array([a for a, _ in self.intervals[i]], dtype=float)

    def durations(self, i: int) -> np.ndarray:
        return np.array([b - a for a, b in self.intervals[i]], dtype=float)

    def pooled_durations(self) -> np.ndarray:
        out = [b - a for per in self.intervals for a, b in per]
        return np.array(out, dtype=float)

    def truncated(self, max_intervals: int) -> "FiringSchedule":
        """Keep at most the first max_intervals intervals per neuron."""
        return FiringSchedule(
            n=self.n,
            horizon=self.horizon,
            intervals=tuple(per[:max_intervals] for per in self.intervals),
        )


def connectivity_grid(n: int) -> np.ndarray:
    """n points evenly spaced on [-0.5, 0.5], endpoints included; [-0.5] for n=1."""
    if n < 1:
        raise ConfigError("n must be at least 1")
    if n == 1:
        return np.array([-0.5])
    return -0.5 + np.arange(n) / (n - 1)


def generate_symmetric_connectivity(n: int) -> ConnectivityMatrix:
    """Distance-dependent inhibitory coupling, symmetric in (i, j).

    W(x, y) = -25 * (1 + tanh(2 - 20|x - y|)) on the standard grid. Strongest
    (about -49.1) on the diagonal, negligible once |x - y| > ~0.3.
    """
    x = connectivity_grid(n)
    dist = np.abs(x[:, None] - x[None, :])
    return ConnectivityMatrix(-25.0 * (1.0 + np.tanh(2.0 - 20.0 * dist)))


def generate_nonsymmetric_connectivity(n: int) -> ConnectivityMatrix:
    """One-sided variant: the symmetric profile for x < y, a linear fade-in
    on y <= x < y + 49/100, and zero farther to the right."""
    x = connectivity_grid(n)
    xi = x[:, None]
    yj = x[None, :]
    delta = xi - yj
    sym = -25.0 * (1.0 + np.tanh(2.0 - 20.0 * np.abs(delta)))
    ramp = 25.0 * (1.0 + np.tanh(2.0)) * (100.0 / 49.0 * delta - 1.0)
    w = np.where(delta < 0.0, sym, np.where(delta < 0.49, ramp, 0.0))
    return ConnectivityMatrix(w)
