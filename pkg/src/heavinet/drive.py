"""Closed-form per-neuron trajectories reconstructed from a firing schedule.

Once the firing intervals of neuron j are known, its dynamics decouple:
s_j' + s_j = 1 on firing intervals and s_j' + s_j = 0 outside them, with
history s_j(t) = s_j0 * e^{-t} on (-tau_d, 0]. Every segment between interval
boundaries is therefore (v - u) * e^{-(t - t_seg)} + u with u in {0, 1}.
Values at segment boundaries are carried forward by recursion, which avoids
the e^{b_k} overflow of the naive summed solution at large horizons and costs
O(#segments + #queries).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import FiringSchedule
from .errors import ConfigError

__all__ = ["ClosedFormDrive", "build_drive", "evaluate_drive"]


@dataclass(frozen=True)
class _NeuronPieces:
    starts: np.ndarray  # segment start times, first = -tau_d
    values: np.ndarray  # state at segment start
    drives: np.ndarray  # 0.0 or 1.0 on the segment


class ClosedFormDrive:
    """Vectorized evaluation of all reconstructed neuron trajectories.

    Valid on (-tau_d, horizon]; evaluation outside raises. Zero-length
    intervals contribute no segment (the trajectory is unchanged by a single
    point of drive).
    """

    def __init__(self, schedule: FiringSchedule, s0: Sequence[float], tau_d: float):
        s0 = np.asarray(s0, dtype=float)
        if s0.shape != (schedule.n,):
            raise ConfigError(f"s0 must have shape ({schedule.n},), got {s0.shape}")
        if tau_d <= 0:
            raise ConfigError("tau_d must be positive")
        self.n = schedule.n
        self.tau_d = float(tau_d)
        self.horizon = float(schedule.horizon)
        self.s0 = s0
        self._pieces = [
            self._build_neuron(schedule.intervals[i], s0[i]) for i in range(self.n)
        ]

    def _build_neuron(self, intervals, s0_i: float) -> _NeuronPieces:
        starts = [-self.tau_d]
        values = [s0_i * np.exp(self.tau_d)]
        drives = [0.0]
        for a, b in intervals:
            if b <= a:
                continue  # a grazing touch leaves the trajectory unchanged
            for t_new, u_new in ((a, 1.0), (b, 0.0)):
                v_prev, u_prev, t_prev = values[-1], drives[-1], starts[-1]
                v_new = (v_prev - u_prev) * np.exp(-(t_new - t_prev)) + u_prev
                starts.append(t_new)
                values.append(v_new)
                drives.append(u_new)
        return _NeuronPieces(
            starts=np.array(starts),
            values=np.array(values),
            drives=np.array(drives),
        )

    def values(self, neuron: int, ts) -> np.ndarray:
        """Trajectory of one neuron at arbitrary times in (-tau_d, horizon]."""
        ts = np.asarray(ts, dtype=float)
        if ts.size and (np.min(ts) <= -self.tau_d or np.max(ts) > self.horizon):
            raise ConfigError(
                f"evaluation times must lie in (-{self.tau_d}, {self.horizon}]"
            )
        p = self._pieces[neuron]
        idx = np.searchsorted(p.starts, ts, side="right") - 1
        idx = np.clip(idx, 0, len(p.starts) - 1)
        return (p.values[idx] - p.drives[idx]) * np.exp(-(ts - p.starts[idx])) + p.drives[idx]

    def value(self, neuron: int, t: float) -> float:
        return float(self.values(neuron, np.array([t]))[0])

    def all_values(self, ts) -> np.ndarray:
        """Matrix of shape (n, len(ts)) with one row per neuron."""
        ts = np.asarray(ts, dtype=float)
        out = np.empty((self.n, ts.size), dtype=float)
        for i in range(self.n):
            out[i] = self.values(i, ts)
        return out


def build_drive(schedule: FiringSchedule, s0, tau_d: float) -> ClosedFormDrive:
    return ClosedFormDrive(schedule, s0, tau_d)


def evaluate_drive(drive: ClosedFormDrive, neuron: int, t: float) -> float:
    if not 0 <= neuron < drive.n:
        raise ConfigError(f"neuron index {neuron} out of range")
    return drive.value(neuron, t)
