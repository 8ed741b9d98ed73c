"""Measurement-noise models for the reconstruction experiments.

Two targets: perturbing the right-hand side of an assembled system (noise on
the input readings), or perturbing the firing intervals themselves (noise on
the measured schedule). Noise streams are counter-based (Philox) and keyed by
(seed, neuron), so one neuron's draws never depend on how many other neurons
exist.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .core import FiringSchedule
from .errors import ConfigError

__all__ = [
    "NoiseSpec",
    "RNG_ALGORITHM",
    "perturb_rhs",
    "perturb_schedule",
    "perturb_schedule_paired",
    "derive_seed",
]

RNG_ALGORITHM = "philox4x64 keyed by (seed, neuron)"

_MIX_A = 0x9E3779B97F4A7C15
_MIX_B = 0xBF58476D1CE4E5B9
_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class NoiseSpec:
    """target "rhs" or "intervals"; level is the relative noise amplitude
    (0.05 means 5%); seed keys the noise streams."""

    target: str
    level: float
    seed: int

    def __post_init__(self):
        if self.target not in ("rhs", "intervals"):
            raise ConfigError(f"unknown noise target {self.target!r}")
        if not (self.level >= 0 and np.isfinite(self.level)):
            raise ConfigError("noise level must be finite and nonnegative")
        if self.seed < 0:
            raise ConfigError("seed must be nonnegative")


def derive_seed(base: int, index: int) -> int:
    """Deterministic 64-bit sub-seed for replicate/stage splitting."""
    return ((base & _MASK64) * _MIX_A + (index & _MASK64) * _MIX_B + 1) & _MASK64


def _stream(seed: int, neuron: int) -> np.random.Generator:
    key = np.array([seed & _MASK64, neuron & _MASK64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def perturb_rhs(system, spec: NoiseSpec) -> Tuple[np.ndarray, float]:
    """Additive Gaussian noise on b, scaled to level * max|b|.

    Returns (b_noisy, exact noise norm); the norm feeds the standard
    discrepancy rule, which assumes the perturbation size is known.
    """
    if spec.target != "rhs":
        raise ConfigError(f"expected target 'rhs', got {spec.target!r}")
    b = system.b
    psi = float(np.max(np.abs(b))) * spec.level if b.size else 0.0
    eta = _stream(spec.seed, system.neuron).standard_normal(b.shape)
    noise = psi * eta
    return b + noise, float(np.linalg.norm(noise))


def perturb_schedule_paired(
    schedule: FiringSchedule, spec: NoiseSpec
) -> Tuple[FiringSchedule, Tuple[np.ndarray, ...]]:
    """Endpoint jitter on all firing intervals.

    The jitter scale is psi = level * median interval length, pooled over the
    whole schedule. Intervals whose ORIGINAL length is below psi are dropped
    (they could not be observed reliably at that noise level); endpoints are
    then jittered independently, swapped if inverted, clipped to (0, T], and
    overlapping results are merged.

    Also returns, per neuron, the clean onset paired with each surviving
    noisy interval (merged intervals inherit the earliest contributor), which
    the adjusted discrepancy rule needs to rebuild the matching clean rows.
    """
    if spec.target != "intervals":
        raise ConfigError(f"expected target 'intervals', got {spec.target!r}")
    durations = schedule.pooled_durations()
    psi = float(np.median(durations)) * spec.level if durations.size else 0.0
    horizon = schedule.horizon

    per_out = []
    pairing = []
    for i in range(schedule.n):
        per = schedule.intervals[i]
        if not per:
            per_out.append(())
            pairing.append(np.empty(0))
            continue
        gen = _stream(spec.seed, i)
        arr = np.array(per, dtype=float)
        kept = arr[(arr[:, 1] - arr[:, 0]) >= psi]
        if kept.size == 0:
            per_out.append(())
            pairing.append(np.empty(0))
            continue
        clean_onsets = kept[:, 0].copy()
        noisy = kept + psi * gen.standard_normal(kept.shape)
        swapped = noisy[:, 0] > noisy[:, 1]
        noisy[swapped] = noisy[swapped][:, ::-1]
        noisy[:, 0] = np.maximum(noisy[:, 0], 0.0)
        noisy[:, 1] = np.minimum(noisy[:, 1], horizon)
        inside = (noisy[:, 1] > 0.0) & (noisy[:, 0] < horizon)
        inside &= noisy[:, 0] <= noisy[:, 1]
        noisy = noisy[inside]
        clean_onsets = clean_onsets[inside]
        order = np.argsort(noisy[:, 0], kind="stable")
        noisy = noisy[order]
        clean_onsets = clean_onsets[order]

        merged: list = []
        merged_clean: list = []
        for (a, b), co in zip(noisy, clean_onsets):
            if merged and a <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], b)
            else:
                merged.append([a, b])
                merged_clean.append(co)
        per_out.append(tuple((a, b) for a, b in merged))
        pairing.append(np.array(merged_clean))

    noisy_schedule = FiringSchedule(
        n=schedule.n, horizon=horizon, intervals=tuple(per_out)
    )
    return noisy_schedule, tuple(pairing)


def perturb_schedule(schedule: FiringSchedule, spec: NoiseSpec) -> FiringSchedule:
    return perturb_schedule_paired(schedule, spec)[0]
