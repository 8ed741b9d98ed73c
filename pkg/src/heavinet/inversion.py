"""Reconstruction of connectivity rows from firing schedules.

At each interior firing onset t the firing argument crosses zero, so
sum_j W_ij s_j(t - tau_d) = -B_i(t) exactly. With the s_j rebuilt in closed
form from the schedule, each neuron yields a linear system A w = b whose
matrix is severely ill-conditioned; truncated SVD with a discrepancy-based
truncation level supplies the stabilized solution. Offset rows are excluded:
they would duplicate onset rows up to near-parallel perturbations and degrade
conditioning without adding information.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .core import ConnectivityMatrix, FiringSchedule, NetworkConfig
from .drive import ClosedFormDrive, build_drive
from .errors import AssemblyError, ConfigError, EmptySystemError

__all__ = [
    "NeuronSystem",
    "TsvdSolution",
    "SelectionSpec",
    "NeuronReport",
    "InversionReport",
    "assemble_system",
    "assemble_all_systems",
    "tsvd_solve",
    "choose_kappa_morozov_standard",
    "choose_kappa_morozov_adjusted",
    "reconstruct_connectivity",
    "verify_inequalities",
]

RANK_CUTOFF = 1e-14


@dataclass(frozen=True)
class NeuronSystem:
    """Onset-row linear system of one neuron: a @ w = b.

    a[k, j] = s_j(t_k - tau_d) for the k-th interior onset t_k, b[k] =
    -B_i(t_k). Onsets at t = 0 are not interior zero crossings and are
    dropped (counted in dropped_onsets).
    """

    neuron: int
    a: np.ndarray
    b: np.ndarray
    onsets: np.ndarray
    dropped_onsets: int = 0

    def __post_init__(self):
        if self.a.ndim != 2 or self.a.shape[0] != self.b.shape[0]:
            raise AssemblyError("system rows of a and b disagree")
        if self.a.shape[0] == 0:
            raise EmptySystemError(f"neuron {self.neuron}: no usable onsets")
        if not (np.all(np.isfinite(self.a)) and np.all(np.isfinite(self.b))):
            raise AssemblyError(f"neuron {self.neuron}: non-finite system entries")

    @property
    def shape(self) -> Tuple[int, int]:
        return self.a.shape


def _assemble_at_onsets(
    drive: ClosedFormDrive,
    onsets: np.ndarray,
    inp,
    neuron: int,
    tau_d: float,
    dropped: int,
) -> NeuronSystem:
    for b in inp.breakpoints_in(0.0, drive.horizon):
        hit = np.abs(onsets - b) <= 1e-12 * max(1.0, abs(b))
        if np.any(hit):
            raise AssemblyError(
                f"neuron {neuron}: onset at t = {b:g} coincides with an input "
                "discontinuity; the onset identity needs a continuous input there"
            )
    a = drive.all_values(onsets - tau_d).T
    b_vec = -inp.at_many(onsets)
    return NeuronSystem(
        neuron=neuron, a=a, b=b_vec, onsets=onsets.copy(), dropped_onsets=dropped
    )


def assemble_system(
    schedule: FiringSchedule,
    drive: ClosedFormDrive,
    inp,
    neuron: int,
    tau_d: float,
) -> NeuronSystem:
    onsets = schedule.onsets(neuron)
    keep = onsets > 0.0
    dropped = int(np.sum(~keep))
    onsets = onsets[keep]
    if onsets.size == 0:
        raise EmptySystemError(f"neuron {neuron}: no usable onsets")
    return _assemble_at_onsets(drive, onsets, inp, neuron, tau_d, dropped)


def assemble_all_systems(
    schedule: FiringSchedule, cfg: NetworkConfig
) -> Dict[int, NeuronSystem]:
    """Systems for every firing neuron, keyed by neuron index."""
    drive = build_drive(schedule, cfg.s0, cfg.tau_d)
    out = {}
    for i in schedule.gamma:
        try:
            out[i] = assemble_system(schedule, drive, cfg.inputs[i], i, cfg.tau_d)
        except EmptySystemError:
            continue
    return out


class _SystemFactor:
    """SVD of one system with incremental truncated solutions.

    Residual norms are computed from the spectral coefficients by a reverse
    cumulative sum, which makes them exactly nonincreasing in kappa.
    """

    def __init__(self, a: np.ndarray, b: np.ndarray):
        u, sig, vt = np.linalg.svd(a, full_matrices=False)
        self.sigma = sig
        if sig.size and sig[0] > 0:
            self.rank = int(np.sum(sig >= RANK_CUTOFF * sig[0]))
        else:
            self.rank = 0
        self.u = u
        self.vt = vt
        self.b = b
        self.coef = u.T @ b
        r = self.rank
        proj = u[:, :r] @ self.coef[:r] if r else np.zeros_like(b)
        res_rank_sq = float(np.dot(b - proj, b - proj))
        tail = np.concatenate([(self.coef[:r] ** 2)[::-1].cumsum()[::-1], [0.0]])
        self.residual_norms = np.sqrt(np.maximum(res_rank_sq + tail, 0.0))

    def weights(self, kappa: int) -> np.ndarray:
        k = min(kappa, self.rank)
        if k == 0:
            return np.zeros(self.vt.shape[1])
        return self.vt[:k].T @ (self.coef[:k] / self.sigma[:k])

    def weights_all(self) -> np.ndarray:
        """(rank+1, n) matrix of truncated solutions for kappa = 0..rank."""
        n = self.vt.shape[1]
        out = np.zeros((self.rank + 1, n))
        for k in range(1, self.rank + 1):
            out[k] = out[k - 1] + self.vt[k - 1] * (self.coef[k - 1] / self.sigma[k - 1])
        return out


@dataclass(frozen=True)
class TsvdSolution:
    neuron: int
    kappa: int
    weights: np.ndarray
    rank: int
    singular_values: np.ndarray
    residual_norms: np.ndarray  # index kappa = 0..rank
    method: str
    flags: Tuple[str, ...] = ()

    @property
    def residual(self) -> float:
        return float(self.residual_norms[min(self.kappa, self.rank)])


def tsvd_solve(system: NeuronSystem, kappa: int, method: str = "fixed") -> TsvdSolution:
    """Truncated-SVD solution with a fixed truncation level; kappa beyond the
    numerical rank is clipped and flagged."""
    if kappa < 0:
        raise ConfigError("kappa must be nonnegative")
    f = _SystemFactor(system.a, system.b)
    flags = ()
    if kappa > f.rank:
        flags = ("kappa_clipped_to_rank",)
        kappa = f.rank
    return TsvdSolution(
        neuron=system.neuron,
        kappa=kappa,
        weights=f.weights(kappa),
        rank=f.rank,
        singular_values=f.sigma,
        residual_norms=f.residual_norms,
        method=method,
        flags=flags,
    )


def _solution_from_factor(system, f, kappa, method, flags) -> TsvdSolution:
    return TsvdSolution(
        neuron=system.neuron,
        kappa=kappa,
        weights=f.weights(kappa),
        rank=f.rank,
        singular_values=f.sigma,
        residual_norms=f.residual_norms,
        method=method,
        flags=tuple(flags),
    )


def choose_kappa_morozov_standard(
    system: NeuronSystem,
    b_noisy: np.ndarray,
    noise_norm: float,
    nu: float = 1.0,
) -> TsvdSolution:
    """Truncation level from the discrepancy principle for a perturbed rhs.

    Picks kappa with ||A w_k - b_noisy|| >= nu * noise_norm > ||A w_{k+1} -
    b_noisy||, i.e. the last level whose residual still dominates the noise.
    Falls back to the full rank (flagged) when no residual drops below the
    threshold, and to kappa = 0 (flagged) when even the zero solution does.
    """
    if b_noisy.shape != system.b.shape:
        raise ConfigError("b_noisy has wrong shape")
    if noise_norm < 0 or nu <= 0:
        raise ConfigError("need noise_norm >= 0 and nu > 0")
    f = _SystemFactor(system.a, b_noisy)
    r = f.residual_norms
    thr = nu * noise_norm
    if r[0] < thr:
        return _solution_from_factor(
            system, f, 0, "morozov_b", ["threshold_exceeds_initial_residual"]
        )
    for k in range(f.rank):
        if r[k] >= thr > r[k + 1]:
            return _solution_from_factor(system, f, k, "morozov_b", [])
    return _solution_from_factor(
        system, f, f.rank, "morozov_b", ["discrepancy_not_reached"]
    )


def choose_kappa_morozov_adjusted(
    system_noisy: NeuronSystem,
    system_clean: NeuronSystem,
    nu: float = 1.0,
) -> TsvdSolution:
    """Truncation level for a perturbed matrix A_delta.

    The noise estimate depends on the candidate itself: tau_k =
    ||(A_delta - A) w_k|| with w_k the truncated solution of the perturbed
    system. Kappa is the first level whose residual the estimated matrix
    perturbation fully explains, ||A_delta w_k - b|| < nu * tau_k. Stopping
    at the level before (the last one with residual >= nu * tau) consistently
    undershoots here: the residual of these systems collapses by orders of
    magnitude in a single level, and the level at the top of that cliff
    carries most of the reconstruction error while the one at the bottom is
    already noise-dominated.
    """
    if system_noisy.shape != system_clean.shape:
        raise AssemblyError(
            "adjusted discrepancy needs row-paired systems of equal shape"
        )
    if nu <= 0:
        raise ConfigError("nu must be positive")
    f = _SystemFactor(system_noisy.a, system_noisy.b)
    e = system_noisy.a - system_clean.a
    w_all = f.weights_all()
    tau = np.linalg.norm(w_all @ e.T, axis=1)
    r = f.residual_norms
    for k in range(1, f.rank + 1):
        if r[k] < nu * tau[k]:
            return _solution_from_factor(system_noisy, f, k, "morozov_a", [])
    return _solution_from_factor(
        system_noisy, f, f.rank, "morozov_a", ["discrepancy_not_reached"]
    )


@dataclass(frozen=True)
class SelectionSpec:
    """Truncation-level policy for reconstruction.

    method: "fixed" (uses kappa), "morozov_b" (perturbed rhs; uses noise_norm
    or a noise realization supplied to reconstruct_connectivity), "morozov_a"
    (perturbed schedule; needs the clean reference), or "oracle" (global
    kappa minimizing the Frobenius error against the true matrix;
    benchmark-only and flagged as such).
    """

    method: str
    kappa: Optional[int] = None
    noise_norm: Optional[float] = None
    nu: float = 1.0

    def __post_init__(self):
        if self.method not in ("fixed", "morozov_b", "morozov_a", "oracle"):
            raise ConfigError(f"unknown selection method {self.method!r}")
        if self.method == "fixed" and (self.kappa is None or self.kappa < 0):
            raise ConfigError("fixed selection needs kappa >= 0")
        if self.nu <= 0:
            raise ConfigError("nu must be positive")


@dataclass(frozen=True)
class NeuronReport:
    neuron: int
    recovered: bool
    kappa: Optional[int] = None
    rank: Optional[int] = None
    rows: int = 0
    dropped_onsets: int = 0
    residual: Optional[float] = None
    sigma_max: Optional[float] = None
    sigma_min_pos: Optional[float] = None
    flags: Tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "neuron": self.neuron,
            "recovered": self.recovered,
            "kappa": self.kappa,
            "rank": self.rank,
            "rows": self.rows,
            "dropped_onsets": self.dropped_onsets,
            "residual": self.residual,
            "sigma_max": self.sigma_max,
            "sigma_min_pos": self.sigma_min_pos,
            "flags": list(self.flags),
        }


@dataclass(frozen=True)
class InversionReport:
    method: str
    nu: float
    recovered: Tuple[int, ...]
    unrecoverable: Tuple[int, ...]
    neurons: Tuple[NeuronReport, ...]
    oracle_kappa: Optional[int] = None
    flags: Tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "nu": self.nu,
            "recovered": list(self.recovered),
            "unrecoverable": list(self.unrecoverable),
            "oracle_kappa": self.oracle_kappa,
            "flags": list(self.flags),
            "neurons": [r.to_dict() for r in self.neurons],
        }


def _neuron_report(sol: TsvdSolution, sys: NeuronSystem) -> NeuronReport:
    sig = sol.singular_values
    pos = sig[sig > 0]
    return NeuronReport(
        neuron=sol.neuron,
        recovered=True,
        kappa=sol.kappa,
        rank=sol.rank,
        rows=sys.shape[0],
        dropped_onsets=sys.dropped_onsets,
        residual=sol.residual,
        sigma_max=float(sig[0]) if sig.size else 0.0,
        sigma_min_pos=float(pos[-1]) if pos.size else None,
        flags=sol.flags,
    )


def reconstruct_connectivity(
    schedule: FiringSchedule,
    cfg: NetworkConfig,
    selection: SelectionSpec,
    rhs_noise=None,
    adjusted_reference: Optional[Tuple[FiringSchedule, Tuple[np.ndarray, ...]]] = None,
    true_connectivity: Optional[ConnectivityMatrix] = None,
) -> Tuple[ConnectivityMatrix, InversionReport]:
    """Row-by-row reconstruction of the coupling matrix.

    Neurons that never fire (or whose only onset is at t = 0) have no rows;
    their entries are returned as zeros and listed as unrecoverable.

    rhs_noise: NoiseSpec applied to each clean rhs before the standard
    discrepancy rule (method "morozov_b").
    adjusted_reference: (clean_schedule, per-neuron clean onsets paired with
    the perturbed schedule's intervals), for method "morozov_a".
    true_connectivity: required by method "oracle".
    """
    from .noise import perturb_rhs  # local import, noise depends on this module

    n = cfg.n
    drive = build_drive(schedule, cfg.s0, cfg.tau_d)
    clean_drive = None
    clean_schedule = None
    pairing = None
    if selection.method == "morozov_a":
        if adjusted_reference is None:
            raise ConfigError("morozov_a selection needs adjusted_reference")
        clean_schedule, pairing = adjusted_reference
        clean_drive = build_drive(clean_schedule, cfg.s0, cfg.tau_d)
    if selection.method == "oracle" and true_connectivity is None:
        raise ConfigError("oracle selection needs true_connectivity")

    w_out = np.zeros((n, n))
    reports: List[NeuronReport] = [None] * n
    oracle_pool: Dict[int, Tuple[NeuronSystem, _SystemFactor]] = {}

    for i in range(n):
        raw_onsets = schedule.onsets(i)
        usable = raw_onsets > 0.0
        if not np.any(usable):
            reports[i] = NeuronReport(
                neuron=i, recovered=False, flags=("unrecoverable",)
            )
            continue
        sys = assemble_system(schedule, drive, cfg.inputs[i], i, cfg.tau_d)
        if rhs_noise is not None:
            b_noisy, noise_norm = perturb_rhs(sys, rhs_noise)
            data_sys = NeuronSystem(
                neuron=i, a=sys.a, b=b_noisy, onsets=sys.onsets,
                dropped_onsets=sys.dropped_onsets,
            )
        else:
            data_sys, noise_norm = sys, selection.noise_norm

        if selection.method == "fixed":
            sol = tsvd_solve(data_sys, selection.kappa)
        elif selection.method == "morozov_b":
            if noise_norm is None:
                raise ConfigError(
                    "morozov_b selection needs rhs_noise or an explicit noise_norm"
                )
            sol = choose_kappa_morozov_standard(
                sys, data_sys.b, noise_norm, selection.nu
            )
        elif selection.method == "morozov_a":
            clean_onsets = np.asarray(
                [np.nan if t is None else t for t in pairing[i]], dtype=float
            )
            if clean_onsets.size != raw_onsets.size:
                raise AssemblyError(
                    f"neuron {i}: pairing length {clean_onsets.size} does not "
                    f"match {raw_onsets.size} intervals"
                )
            if np.isnan(clean_onsets[usable]).any():
                raise AssemblyError(
                    f"neuron {i}: perturbed interval without a clean "
                    "counterpart; adjusted selection needs a full pairing"
                )
            clean_sys = _assemble_at_onsets(
                clean_drive, clean_onsets[usable], cfg.inputs[i], i, cfg.tau_d, 0
            )
            sol = choose_kappa_morozov_adjusted(sys, clean_sys, selection.nu)
        else:  # oracle
            oracle_pool[i] = (data_sys, _SystemFactor(data_sys.a, data_sys.b))
            continue

        w_out[i] = sol.weights
        reports[i] = _neuron_report(sol, sys)

    oracle_kappa = None
    flags: Tuple[str, ...] = ()
    if selection.method == "oracle":
        oracle_kappa = _oracle_global_kappa(oracle_pool, true_connectivity, w_out)
        flags = ("oracle_benchmark_only",)
        for i, (sys, f) in oracle_pool.items():
            k_i = min(oracle_kappa, f.rank)
            sol = _solution_from_factor(sys, f, k_i, "oracle", ["oracle_benchmark_only"])
            w_out[i] = sol.weights
            reports[i] = _neuron_report(sol, sys)

    recovered = tuple(i for i in range(n) if reports[i] is not None and reports[i].recovered)
    unrecoverable = tuple(i for i in range(n) if reports[i] is None or not reports[i].recovered)
    for i in range(n):
        if reports[i] is None:
            reports[i] = NeuronReport(neuron=i, recovered=False, flags=("unrecoverable",))

    report = InversionReport(
        method=selection.method,
        nu=selection.nu,
        recovered=recovered,
        unrecoverable=unrecoverable,
        neurons=tuple(reports),
        oracle_kappa=oracle_kappa,
        flags=flags,
    )
    return ConnectivityMatrix(w_out), report


def _oracle_global_kappa(pool, true_connectivity, w_base: np.ndarray) -> int:
    """Global truncation level minimizing the Frobenius error; rows truncate
    at min(kappa, rank_i)."""
    w_true = true_connectivity.w
    w_cur = w_base.copy()  # zeros for pooled rows, fixed rows already final
    max_rank = max((f.rank for _, f in pool.values()), default=0)
    best_err = np.linalg.norm(w_cur - w_true)
    best_k = 0
    for k in range(1, max_rank + 1):
        for i, (_, f) in pool.items():
            if f.rank >= k:
                w_cur[i] += f.vt[k - 1] * (f.coef[k - 1] / f.sigma[k - 1])
        err = np.linalg.norm(w_cur - w_true)
        if err < best_err:
            best_err = err
            best_k = k
    return best_k


def verify_inequalities(
    w: ConnectivityMatrix,
    schedule: FiringSchedule,
    cfg: NetworkConfig,
    sample_dt: float = 1e-2,
) -> np.ndarray:
    """Measure of sampled times where a candidate matrix contradicts the
    schedule: argument negative strictly inside a firing interval, or
    nonnegative strictly outside all of them. Interval endpoints are skipped
    (the argument legitimately vanishes there)."""
    if sample_dt <= 0:
        raise ConfigError("sample_dt must be positive")
    drive = build_drive(schedule, cfg.s0, cfg.tau_d)
    n_pts = int(np.floor(schedule.horizon / sample_dt + 1e-9))
    ts = np.arange(1, n_pts + 1) * sample_dt
    s_delayed = drive.all_values(ts - cfg.tau_d)
    violation = np.zeros(cfg.n)
    for i in range(cfg.n):
        args = w.w[i] @ s_delayed + cfg.inputs[i].at_many(ts)
        per = schedule.intervals[i]
        if per:
            starts = np.array([a for a, _ in per])
            ends = np.array([b for _, b in per])
            idx = np.searchsorted(starts, ts, side="right") - 1
            idx_c = np.clip(idx, 0, starts.size - 1)
            interior = (idx >= 0) & (ts > starts[idx_c]) & (ts < ends[idx_c])
            on_boundary = (idx >= 0) & (
                np.isclose(ts, starts[idx_c], rtol=0.0, atol=1e-12)
                | np.isclose(ts, ends[idx_c], rtol=0.0, atol=1e-12)
            )
            outside = ~interior & ~on_boundary
        else:
            interior = np.zeros(ts.size, dtype=bool)
            outside = np.ones(ts.size, dtype=bool)
        bad = (interior & (args < 0.0)) | (outside & (args >= 0.0))
        violation[i] = np.count_nonzero(bad) * sample_dt
    return violation
