"""Spectral diagnostics for the onset-row systems.

Two questions: do the singular values obey the structural bounds implied by
the trajectory envelope (sigma_1 at least e^{-T}||s0||, smallest positive
sigma at most a constant times the minimum onset gap), and does the spectrum
decay algebraically or exponentially (mild vs severe ill-posedness)?
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import ConfigError, InsufficientDataError
from .inversion import RANK_CUTOFF, NeuronSystem

__all__ = ["SpectrumDiagnostics", "DecayFit", "spectrum_diagnostics", "fit_decay"]


@dataclass(frozen=True)
class SpectrumDiagnostics:
    neuron: int
    singular_values: np.ndarray
    rank: int
    min_onset_gap: Optional[float]
    gap_row: Optional[int]  # row index of the first onset of the closest pair
    c_lower: float  # e^{-T} ||s0||_2, lower bound for sigma_1
    c_upper: float  # ||s0 + 1||_2, trajectory envelope constant
    sigma1: float
    sigma1_bound_ok: bool
    e_hat_norm: Optional[float]
    sigma_small_bound: Optional[float]  # c_upper * gap / ||e_hat||
    sigma_small: Optional[float]
    sigma_small_bound_ok: Optional[bool]
    cond_lower_bound: Optional[float]  # sqrt(2) c_lower / (c_upper * gap)
    cond_actual: Optional[float]
    flags: Tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "neuron": self.neuron,
            "singular_values": [float(s) for s in self.singular_values],
            "rank": self.rank,
            "min_onset_gap": self.min_onset_gap,
            "gap_row": self.gap_row,
            "c_lower": self.c_lower,
            "c_upper": self.c_upper,
            "sigma1": self.sigma1,
            "sigma1_bound_ok": self.sigma1_bound_ok,
            "e_hat_norm": self.e_hat_norm,
            "sigma_small_bound": self.sigma_small_bound,
            "sigma_small": self.sigma_small,
            "sigma_small_bound_ok": self.sigma_small_bound_ok,
            "cond_lower_bound": self.cond_lower_bound,
            "cond_actual": self.cond_actual,
            "flags": list(self.flags),
        }


def spectrum_diagnostics(system: NeuronSystem, s0, T: float) -> SpectrumDiagnostics:
    """Singular spectrum of one system against its structural bounds.

    sigma_1 must be at least e^{-T}||s0||. The smallest positive sigma is
    bounded by c_upper * h / ||e_hat||, where h is the minimum onset gap
    (rows q, q+1) and e_hat the projection of e_{q+1} - e_q onto the column
    space. For invertible square systems ||e_hat|| = sqrt(2), which gives the
    condition-number lower bound sqrt(2) * c_lower / (c_upper * h).
    """
    s0 = np.asarray(s0, dtype=float)
    if T <= 0:
        raise ConfigError("T must be positive")
    u, sigma, _ = np.linalg.svd(system.a, full_matrices=False)
    sigma1 = float(sigma[0]) if sigma.size else 0.0
    rank = int(np.sum(sigma >= RANK_CUTOFF * sigma1)) if sigma1 > 0 else 0

    c_lower = math.exp(-T) * float(np.linalg.norm(s0))
    c_upper = float(np.linalg.norm(s0 + 1.0))
    flags = []

    onsets = system.onsets
    if onsets.size >= 2:
        gaps = np.diff(onsets)
        q = int(np.argmin(gaps))
        h = float(gaps[q])
    else:
        q = None
        h = None
        flags.append("gap_undefined")

    e_hat_norm = None
    sigma_small_bound = None
    sigma_small = float(sigma[rank - 1]) if rank else None
    sigma_small_ok = None
    cond_lower = None
    cond_actual = None
    if h is not None and rank:
        e = np.zeros(system.a.shape[0])
        e[q + 1] = 1.0
        e[q] = -1.0
        coeffs = u[:, :rank].T @ e
        e_hat_norm = float(np.linalg.norm(coeffs))
        if e_hat_norm > 1e-10:
            sigma_small_bound = c_upper * h / e_hat_norm
            sigma_small_ok = bool(sigma_small <= sigma_small_bound + 1e-12 * sigma1)
        else:
            flags.append("difference_vector_outside_range")
        if h > 0:
            cond_lower = math.sqrt(2.0) * c_lower / (c_upper * h)
        if sigma_small and sigma_small > 0:
            cond_actual = sigma1 / sigma_small

    return SpectrumDiagnostics(
        neuron=system.neuron,
        singular_values=sigma,
        rank=rank,
        min_onset_gap=h,
        gap_row=q,
        c_lower=c_lower,
        c_upper=c_upper,
        sigma1=sigma1,
        sigma1_bound_ok=bool(sigma1 >= c_lower - 1e-15 * max(1.0, sigma1)),
        e_hat_norm=e_hat_norm,
        sigma_small_bound=sigma_small_bound,
        sigma_small=sigma_small,
        sigma_small_bound_ok=sigma_small_ok,
        cond_lower_bound=cond_lower,
        cond_actual=cond_actual,
        flags=tuple(flags),
    )


@dataclass(frozen=True)
class DecayFit:
    """Least-squares fits of sigma_m ~ C m^{-alpha} and ~ C e^{-alpha m}."""

    n_used: int
    c_algebraic: float
    alpha_algebraic: float
    r2_algebraic: float
    c_exponential: float
    alpha_exponential: float
    r2_exponential: float
    classification: str  # "severe", "mild", or "inconclusive"

    def to_dict(self) -> dict:
        return {
            "n_used": self.n_used,
            "c_algebraic": self.c_algebraic,
            "alpha_algebraic": self.alpha_algebraic,
            "r2_algebraic": self.r2_algebraic,
            "c_exponential": self.c_exponential,
            "alpha_exponential": self.alpha_exponential,
            "r2_exponential": self.r2_exponential,
            "classification": self.classification,
        }


def _r2(y: np.ndarray, fitted: np.ndarray) -> float:
    ss_res = float(np.sum((y - fitted) ** 2))
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    if ss_tot == 0.0:
        return 1.0 if ss_res < 1e-12 else 0.0
    return 1.0 - ss_res / ss_tot


def fit_decay(singular_values) -> DecayFit:
    """Fit both decay laws to the positive spectrum above the rank cutoff.

    Severe (exponential) wins when its r^2 beats the algebraic one by at
    least 0.05, and vice versa; anything closer is inconclusive.
    """
    sigma = np.asarray(singular_values, dtype=float)
    if sigma.size == 0 or sigma[0] <= 0:
        raise InsufficientDataError("no positive singular values")
    usable = sigma[(sigma >= RANK_CUTOFF * sigma[0]) & (sigma > 0.0)]
    if usable.size < 4:
        raise InsufficientDataError(
            f"need at least 4 usable singular values, got {usable.size}"
        )
    m = np.arange(1, usable.size + 1, dtype=float)
    y = np.log(usable)

    slope_a, icept_a = np.polyfit(np.log(m), y, 1)
    r2_a = _r2(y, slope_a * np.log(m) + icept_a)
    slope_e, icept_e = np.polyfit(m, y, 1)
    r2_e = _r2(y, slope_e * m + icept_e)

    if r2_e >= r2_a + 0.05:
        cls = "severe"
    elif r2_a >= r2_e + 0.05:
        cls = "mild"
    else:
        cls = "inconclusive"
    return DecayFit(
        n_used=int(usable.size),
        c_algebraic=float(np.exp(icept_a)),
        alpha_algebraic=float(-slope_a),
        r2_algebraic=r2_a,
        c_exponential=float(np.exp(icept_e)),
        alpha_exponential=float(-slope_e),
        r2_exponential=r2_e,
        classification=cls,
    )
