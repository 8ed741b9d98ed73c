"""Forward simulation of the delayed Heaviside firing-rate network.

State dynamics per neuron: s_i' + s_i = Phi(sum_j W_ij s_j(t - tau_d) + B_i(t))
with Phi the Heaviside step and Phi(0) = 1, history s_i(t) = s_i0 * e^{-t} on
(-tau_d, 0].

Two simulators are provided. The grid simulator is explicit Euler with the
delayed state taken at an exact integer step offset; it is the workhorse for
experiments. The event simulator exploits that between events every delayed
trajectory is c1*e^{-t} + c2, so each neuron's firing argument is monotone on
a phase and its zero crossings have closed form; it produces exact schedules
for constant or piecewise-constant inputs.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .core import (
    ConnectivityMatrix,
    ConstantInput,
    FiringSchedule,
    NetworkConfig,
    PiecewiseConstantInput,
)
from .errors import (
    ConfigError,
    DivergenceError,
    EventExplosionError,
    UnsupportedInputError,
)

__all__ = [
    "GridTrajectory",
    "PiecewiseExpTrajectory",
    "simulate_euler",
    "simulate_exact",
    "euler_firing_schedule",
    "extract_firing_schedule",
    "estimate_beta_measure",
    "check_c_assumption",
    "check_c_assumption_sampled",
]

EVENT_CAP = 10_000_000

# The block scan multiplies by (1-dt)^{-k}, k < tau_d/dt; fall back to plain
# stepping when those weights would lose precision.
_SCAN_WEIGHT_LIMIT = 50.0


@dataclass(frozen=True)
class GridTrajectory:
    """Euler trajectory on the uniform grid from -tau_d to ~T (step dt)."""

    config: NetworkConfig
    connectivity: ConnectivityMatrix
    times: np.ndarray  # (M,)
    s: np.ndarray  # (n, M)

    @property
    def dt(self) -> float:
        return self.config.dt

    def sample(self, ts) -> np.ndarray:
        """Linear interpolation of all neurons at times in [-tau_d, grid end]."""
        ts = np.asarray(ts, dtype=float)
        t0 = self.times[0]
        pos = (ts - t0) / self.dt
        if ts.size and (np.min(pos) < -1e-9 or np.max(pos) > self.times.size - 1 + 1e-9):
            raise ConfigError("sample times outside the simulated grid")
        idx = np.clip(np.floor(pos).astype(int), 0, self.times.size - 2)
        frac = np.clip(pos - idx, 0.0, 1.0)
        return self.s[:, idx] * (1.0 - frac) + self.s[:, idx + 1] * frac


@dataclass(frozen=True)
class PiecewiseExpTrajectory:
    """Event-simulator trajectory: per neuron, segments (v - u)e^{-(t-ts)} + u.

    seg_starts[i][0] is -tau_d (history segment, u = 0). Firing intervals and
    grazing touches observed during simulation are stored so that schedule
    extraction is exact.
    """

    config: NetworkConfig
    connectivity: ConnectivityMatrix
    seg_starts: Tuple[np.ndarray, ...]
    seg_values: Tuple[np.ndarray, ...]
    seg_drives: Tuple[np.ndarray, ...]
    intervals: Tuple[Tuple[Tuple[float, float], ...], ...]
    touches: Tuple[Tuple[float, ...], ...]

    def value(self, neuron: int, t: float) -> float:
        return float(self.sample_neuron(neuron, np.array([t]))[0])

    def sample_neuron(self, neuron: int, ts) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        tau, T = self.config.tau_d, self.config.T
        if ts.size and (np.min(ts) < -tau or np.max(ts) > T + 1e-12 * max(1.0, T)):
            raise ConfigError(f"sample times must lie in [-{tau}, {T}]")
        starts = self.seg_starts[neuron]
        idx = np.clip(np.searchsorted(starts, ts, side="right") - 1, 0, starts.size - 1)
        u = self.seg_drives[neuron][idx]
        v = self.seg_values[neuron][idx]
        return (v - u) * np.exp(-(ts - starts[idx])) + u

    def sample(self, ts) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        out = np.empty((self.config.n, ts.size), dtype=float)
        for i in range(self.config.n):
            out[i] = self.sample_neuron(i, ts)
        return out


def _constant_input_vector(cfg: NetworkConfig) -> Optional[np.ndarray]:
    if all(isinstance(inp, ConstantInput) for inp in cfg.inputs):
        return np.array([inp.value for inp in cfg.inputs], dtype=float)
    return None


def _inputs_at_times(cfg: NetworkConfig, ts: np.ndarray) -> np.ndarray:
    out = np.empty((cfg.n, ts.size), dtype=float)
    for i, inp in enumerate(cfg.inputs):
        out[i] = inp.at_many(ts)
    return out


def _euler_sweep(cfg: NetworkConfig, w: ConnectivityMatrix, keep_trajectory: bool):
    """Shared Euler core: steps the grid, tracks firing runs, optionally
    retains the full state array.

    Returns (times or None, s or None, intervals in grid columns, grid_end).
    """
    if w.n != cfg.n:
        raise ConfigError("connectivity size does not match config")
    d = cfg.delay_steps
    dt = cfg.dt
    n = cfg.n
    n_steps = int(math.floor(cfg.T / dt + 1e-9))
    if n_steps < 1:
        raise ConfigError("horizon shorter than one Euler step")
    last_col = d + n_steps

    q = 1.0 - dt
    windowed = 0.0 < q < 1.0 and d * abs(math.log(q)) <= _SCAN_WEIGHT_LIMIT

    const_b = _constant_input_vector(cfg)
    W = w.w

    hist_times = (np.arange(d + 1) - d) * dt
    hist = cfg.s0[:, None] * np.exp(-hist_times[None, :])

    s_full = None
    if keep_trajectory:
        s_full = np.empty((n, last_col + 1), dtype=float)
        s_full[:, : d + 1] = hist

    run_open = np.zeros(n, dtype=bool)
    open_col = np.zeros(n, dtype=int)
    col_intervals: List[List[Tuple[int, int]]] = [[] for _ in range(n)]

    c0 = d
    while c0 <= last_col:
        c_hi = min(c0 + d, last_col)
        L = c_hi - c0 + 1
        block_times = (np.arange(c0, c_hi + 1) - d) * dt

        delayed = hist[:, :L]
        args = W @ delayed
        if const_b is not None:
            args += const_b[:, None]
        else:
            args += _inputs_at_times(cfg, block_times)
        fire = args >= 0.0

        n_step = min(c_hi, last_col - 1) - c0 + 1
        if n_step > 0:
            f = fire[:, :n_step].astype(float)
            if windowed:
                k = np.arange(n_step)
                qk = q**k
                csum = np.cumsum(f * q ** (-k)[None, :], axis=1)
                block_s = (qk * q)[None, :] * hist[:, -1:] + dt * qk[None, :] * csum
            else:
                block_s = np.empty((n, n_step), dtype=float)
                cur = hist[:, -1]
                for m in range(n_step):
                    cur = q * cur + dt * f[:, m]
                    block_s[:, m] = cur
            if not np.all(np.isfinite(block_s)):
                raise DivergenceError(
                    f"non-finite state near t = {block_times[0]:.6g}"
                )
            if keep_trajectory:
                s_full[:, c0 + 1 : c0 + 1 + n_step] = block_s

        # Firing runs are defined on grid times in (0, T], i.e. columns > d.
        lo_off = 1 if c0 == d else 0
        ext = fire[:, lo_off:]
        if ext.shape[1]:
            prev = np.concatenate([run_open[:, None], ext[:, :-1]], axis=1)
            rows, cols = np.nonzero(ext != prev)
            base = c0 + lo_off
            for r, c in zip(rows, cols):
                if ext[r, c]:
                    open_col[r] = base + c
                else:
                    col_intervals[r].append((open_col[r], base + c - 1))
            run_open = ext[:, -1].copy()

        if n_step > 0:
            nxt = np.empty((n, d + 1), dtype=float)
            width = min(d + 1, hist.shape[1] + n_step)
            take_old = width - n_step
            if take_old > 0:
                nxt[:, :take_old] = hist[:, hist.shape[1] - take_old :]
                nxt[:, take_old:width] = block_s
            else:
                nxt[:, :width] = block_s[:, n_step - width :]
            hist = nxt[:, :width]
        c0 = c_hi + 1

    for r in range(n):
        if run_open[r]:
            col_intervals[r].append((open_col[r], last_col))

    times = None
    if keep_trajectory:
        times = (np.arange(last_col + 1) - d) * dt
    return times, s_full, col_intervals, d, dt


def _cols_to_schedule(cfg, col_intervals, d, dt) -> FiringSchedule:
    # (col * dt) can overshoot T by a few ulps when T is not an exact
    # multiple in floats; the schedule validator rejects that.
    intervals = tuple(
        tuple((min((a - d) * dt, cfg.T), min((b - d) * dt, cfg.T)) for a, b in per)
        for per in col_intervals
    )
    return FiringSchedule(n=cfg.n, horizon=cfg.T, intervals=intervals)


def simulate_euler(cfg: NetworkConfig, w: ConnectivityMatrix) -> GridTrajectory:
    """Explicit Euler integration on the uniform grid. Requires tau_d/dt
    integral; the firing argument is evaluated at the current step time."""
    times, s, _, _, _ = _euler_sweep(cfg, w, keep_trajectory=True)
    return GridTrajectory(config=cfg, connectivity=w, times=times, s=s)


def euler_firing_schedule(cfg: NetworkConfig, w: ConnectivityMatrix) -> FiringSchedule:
    """Euler firing schedule without materializing the trajectory (rolling
    delay-window buffer; identical arithmetic to simulate_euler)."""
    _, _, col_intervals, d, dt = _euler_sweep(cfg, w, keep_trajectory=False)
    return _cols_to_schedule(cfg, col_intervals, d, dt)


# ---------------------------------------------------------------------------
# Event-driven simulation


def _exact_supported(cfg: NetworkConfig) -> None:
    for i, inp in enumerate(cfg.inputs):
        if not isinstance(inp, (ConstantInput, PiecewiseConstantInput)):
            raise UnsupportedInputError(
                f"neuron {i}: event simulation needs constant or piecewise-"
                f"constant input, got {type(inp).__name__}"
            )


class _EventState:
    """Mutable bookkeeping for one event-driven run."""

    def __init__(self, cfg: NetworkConfig):
        n, tau = cfg.n, cfg.tau_d
        self.cfg = cfg
        self.seg_starts = [[-tau] for _ in range(n)]
        self.seg_values = [[cfg.s0[i] * math.exp(tau)] for i in range(n)]
        self.seg_drives = [[0.0] for _ in range(n)]
        self.ptr = [0] * n
        self.u = np.zeros(n)
        self.onset_open: List[Optional[float]] = [None] * n
        self.intervals: List[List[Tuple[float, float]]] = [[] for _ in range(n)]
        self.touches: List[List[float]] = [[] for _ in range(n)]
        self.events = 0

    def segment_value(self, i: int, t: float) -> float:
        st, vl, dr = self.seg_starts[i], self.seg_values[i], self.seg_drives[i]
        return (vl[-1] - dr[-1]) * math.exp(-(t - st[-1])) + dr[-1]

    def delayed(self, t: float) -> Tuple[np.ndarray, np.ndarray]:
        """State and drive of every neuron at t - tau_d (governing segment)."""
        td = t - self.cfg.tau_d
        tie = 1e-15 * max(1.0, abs(td))
        n = self.cfg.n
        m = np.empty(n)
        udel = np.empty(n)
        for j in range(n):
            st = self.seg_starts[j]
            p = self.ptr[j]
            while p + 1 < len(st) and st[p + 1] <= td + tie:
                p += 1
            self.ptr[j] = p
            u = self.seg_drives[j][p]
            m[j] = (self.seg_values[j][p] - u) * math.exp(-(td - st[p])) + u
            udel[j] = u
        return m, udel

    def flip(self, i: int, t: float, f_new: int, heap) -> None:
        if f_new == 1:
            self.onset_open[i] = t
        else:
            self.intervals[i].append((self.onset_open[i], t))
            self.onset_open[i] = None
        val = self.segment_value(i, t)
        self.seg_starts[i].append(t)
        self.seg_values[i].append(val)
        self.seg_drives[i].append(float(f_new))
        self.u[i] = f_new
        heapq.heappush(heap, t + self.cfg.tau_d)
        self.events += 1
        if self.events > EVENT_CAP:
            raise EventExplosionError(f"more than {EVENT_CAP} events before t = {t:.6g}")


def simulate_exact(cfg: NetworkConfig, w: ConnectivityMatrix) -> PiecewiseExpTrajectory:
    """Event-driven integration with closed-form crossing times.

    Phases are delimited by delayed event times (event + tau_d), input
    breakpoints, and T. Within a phase, neuron i's firing argument is
    D1_i * e^{-(t - t0)} + D2_i, monotone, so it crosses zero at most once at
    t0 + ln(-D1_i / D2_i). Simultaneous crossings are processed in ascending
    neuron order. Grazing contacts from above (argument touching zero while
    the neuron is off) are recorded as zero-length intervals.
    """
    _exact_supported(cfg)
    if w.n != cfg.n:
        raise ConfigError("connectivity size does not match config")
    n, T = cfg.n, cfg.T
    W = w.w

    st = _EventState(cfg)
    heap: List[float] = [T]
    for inp in cfg.inputs:
        for b in inp.breakpoints_in(0.0, T):
            heap.append(b)
    heapq.heapify(heap)

    b_at = lambda t: np.array([inp.at(t) for inp in cfg.inputs])

    t = 0.0
    while t < T:
        while heap and heap[0] <= t:
            heapq.heappop(heap)
        t_next = heap[0] if heap else T

        m, udel = st.delayed(t)
        d1 = W @ (m - udel)
        d2 = W @ udel + b_at(t)
        v = d1 + d2
        scale = 1.0 + np.abs(d1) + np.abs(d2)

        for i in range(n):
            if abs(v[i]) <= 1e-12 * scale[i]:
                # Tangent start: the sign immediately after t is decided by
                # monotonicity (d1 > 0 means decreasing argument).
                if d1[i] > 0.0:
                    f_new = 0
                    if st.u[i] == 0:
                        st.touches[i].append(t)
                else:
                    f_new = 1
            else:
                f_new = 1 if v[i] > 0.0 else 0
            if f_new != st.u[i]:
                st.flip(i, t, f_new, heap)

        span = t_next - t
        g_end = d1 * np.exp(-span) + d2
        roots: List[Tuple[float, int]] = []
        for i in range(n):
            if st.u[i] == 1:
                crossing = g_end[i] < 0.0
            else:
                crossing = g_end[i] > 0.0
            if not crossing or d2[i] == 0.0:
                continue
            ratio = -d1[i] / d2[i]
            if ratio <= 0.0:
                continue
            delta = math.log(ratio)
            if delta <= 0.0:
                continue  # collapses onto the phase start, already resolved
            roots.append((t + min(delta, span), i))

        if roots:
            t_event = min(tr for tr, _ in roots)
            tie = 1e-12 * max(1.0, t_event)
            batch = sorted(i for tr, i in roots if tr <= t_event + tie)
            for i in batch:
                st.flip(i, t_event, 0 if st.u[i] == 1 else 1, heap)
            t = t_event
        else:
            t = t_next

    for i in range(n):
        if st.u[i] == 1:
            st.intervals[i].append((st.onset_open[i], T))

    return PiecewiseExpTrajectory(
        config=cfg,
        connectivity=w,
        seg_starts=tuple(np.array(s) for s in st.seg_starts),
        seg_values=tuple(np.array(s) for s in st.seg_values),
        seg_drives=tuple(np.array(s) for s in st.seg_drives),
        intervals=tuple(tuple(per) for per in st.intervals),
        touches=tuple(tuple(per) for per in st.touches),
    )


def extract_firing_schedule(traj) -> FiringSchedule:
    """Firing intervals of a simulated trajectory, as subsets of (0, T].

    Grid trajectories: the indicator Phi(W s(t - tau_d) + B(t)) is evaluated
    on grid times in (0, T]; maximal runs of ones become closed intervals
    (single-point runs give zero-length intervals). Event trajectories carry
    their exact intervals and grazing touches already.
    """
    if isinstance(traj, GridTrajectory):
        cfg = traj.config
        d = cfg.delay_steps
        dt = cfg.dt
        W = traj.connectivity.w
        last_col = traj.times.size - 1
        const_b = _constant_input_vector(cfg)
        col_intervals: List[List[Tuple[int, int]]] = [[] for _ in range(cfg.n)]
        run_open = np.zeros(cfg.n, dtype=bool)
        open_col = np.zeros(cfg.n, dtype=int)
        c0 = d + 1
        while c0 <= last_col:
            c_hi = min(c0 + d - 1, last_col)
            args = W @ traj.s[:, c0 - d : c_hi - d + 1]
            if const_b is not None:
                args += const_b[:, None]
            else:
                args += _inputs_at_times(cfg, traj.times[c0 : c_hi + 1])
            fire = args >= 0.0
            prev = np.concatenate([run_open[:, None], fire[:, :-1]], axis=1)
            rows, cols = np.nonzero(fire != prev)
            for r, c in zip(rows, cols):
                if fire[r, c]:
                    open_col[r] = c0 + c
                else:
                    col_intervals[r].append((open_col[r], c0 + c - 1))
            run_open = fire[:, -1].copy()
            c0 = c_hi + 1
        for r in range(cfg.n):
            if run_open[r]:
                col_intervals[r].append((open_col[r], last_col))
        return _cols_to_schedule(cfg, col_intervals, d, dt)

    if isinstance(traj, PiecewiseExpTrajectory):
        cfg = traj.config
        tol = 1e-12 * max(1.0, cfg.T)
        merged = []
        for i in range(cfg.n):
            per = []
            for a, b in traj.intervals[i]:
                # An argument grazing zero from the firing side emits an
                # off/on pair at one instant; Phi(0) = 1 keeps the interval
                # connected, so re-join across sub-tolerance gaps.
                if per and a - per[-1][1] <= tol:
                    per[-1] = (per[-1][0], b)
                else:
                    per.append((a, b))
            starts = np.array([a for a, _ in per]) if per else np.empty(0)
            ends = np.array([b for _, b in per]) if per else np.empty(0)
            for tt in traj.touches[i]:
                # Discard touches that float rounding placed on an interval.
                k = np.searchsorted(starts, tt, side="right") - 1
                inside = k >= 0 and tt <= ends[k] + tol
                ahead = k + 1 < starts.size and tt >= starts[k + 1] - tol
                if not inside and not ahead:
                    per.append((tt, tt))
            per.sort()
            merged.append(tuple(per))
        return FiringSchedule(n=cfg.n, horizon=cfg.T, intervals=tuple(merged))

    raise ConfigError(f"unknown trajectory type {type(traj).__name__}")


# ---------------------------------------------------------------------------
# Threshold-proximity measure


def _beta_grid(traj: GridTrajectory, gamma: float, sample_dt: float) -> np.ndarray:
    cfg = traj.config
    W = traj.connectivity.w
    t_end = float(traj.times[-1])
    n_pts = int(math.floor(t_end / sample_dt + 1e-9)) + 1
    counts = np.zeros(cfg.n, dtype=int)
    chunk = max(1, int(2_000_000 / max(1, cfg.n)))
    for lo in range(0, n_pts, chunk):
        hi = min(lo + chunk, n_pts)
        ts = np.arange(lo, hi) * sample_dt
        args = W @ traj.sample(ts - cfg.tau_d) + _inputs_at_times(cfg, ts)
        counts += np.count_nonzero(np.abs(args) <= 1.0 / gamma, axis=1)
    return counts * sample_dt


def _beta_exact(traj: PiecewiseExpTrajectory, gamma: float) -> np.ndarray:
    cfg = traj.config
    W = traj.connectivity.w
    tau, T, n = cfg.tau_d, cfg.T, cfg.n
    r = 1.0 / gamma

    bounds = {0.0, T}
    for i in range(n):
        for s in traj.seg_starts[i]:
            tb = float(s) + tau
            if 0.0 < tb < T:
                bounds.add(tb)
        for b in cfg.inputs[i].breakpoints_in(0.0, T):
            bounds.add(b)
    bounds = sorted(bounds)

    ptr = [0] * n
    measures = np.zeros(n)
    m = np.empty(n)
    udel = np.empty(n)
    for ta, tb in zip(bounds[:-1], bounds[1:]):
        td = ta - tau
        tie = 1e-15 * max(1.0, abs(td))
        for j in range(n):
            st = traj.seg_starts[j]
            p = ptr[j]
            while p + 1 < st.size and st[p + 1] <= td + tie:
                p += 1
            ptr[j] = p
            u = traj.seg_drives[j][p]
            m[j] = (traj.seg_values[j][p] - u) * math.exp(-(td - st[p])) + u
            udel[j] = u
        d1 = W @ (m - udel)
        d2 = W @ udel + np.array([inp.at(ta) for inp in cfg.inputs])
        span = tb - ta
        for i in range(n):
            measures[i] += _phase_band_measure(d1[i], d2[i], r, span)
    return measures


def _phase_band_measure(d1: float, d2: float, r: float, span: float) -> float:
    """Length of {t in [0, span]: |d1*e^{-t} + d2| <= r} for monotone d1*e^{-t}+d2."""
    if d1 == 0.0:
        return span if abs(d2) <= r else 0.0

    def hit(level: float, fallback: float) -> float:
        # Solve d1*e^{-t} + d2 = level inside [0, span]; fallback when the
        # level is not attained (the band edge lies beyond the phase).
        ratio = d1 / (level - d2)
        if ratio <= 0.0:
            return fallback
        t = math.log(ratio)
        return min(max(t, 0.0), span)

    ga = d1 + d2
    gb = d1 * math.exp(-span) + d2
    if d1 < 0.0:  # increasing argument
        if ga > r or gb < -r:
            return 0.0
        lo = 0.0 if ga >= -r else hit(-r, span)
        hi = span if gb <= r else hit(r, 0.0)
    else:  # decreasing argument
        if ga < -r or gb > r:
            return 0.0
        lo = 0.0 if ga <= r else hit(r, span)
        hi = span if gb >= -r else hit(-r, 0.0)
    return max(0.0, hi - lo)


def estimate_beta_measure(traj, gamma: float, sample_dt: Optional[float] = None) -> np.ndarray:
    """Per-neuron measure of {t in [0, T]: |firing argument| <= 1/gamma}.

    Exact (phase-by-phase closed form) for event trajectories; a sampled
    estimate on grid trajectories, where sample_dt defaults to dt and must
    not exceed it.
    """
    if gamma <= 0:
        raise ConfigError("gamma must be positive")
    if isinstance(traj, PiecewiseExpTrajectory):
        return _beta_exact(traj, gamma)
    if isinstance(traj, GridTrajectory):
        if sample_dt is None:
            sample_dt = traj.dt
        if not 0.0 < sample_dt <= traj.dt + 1e-15:
            raise ConfigError("sample_dt must lie in (0, dt]")
        return _beta_grid(traj, gamma, sample_dt)
    raise ConfigError(f"unknown trajectory type {type(traj).__name__}")


# ---------------------------------------------------------------------------
# Input-level degeneracy check


def _subset_sums(values: np.ndarray) -> np.ndarray:
    sums = np.zeros(1)
    for x in values:
        sums = np.concatenate([sums, sums + x])
    return sums


def check_c_assumption(w: ConnectivityMatrix, c, tol: float = 1e-9) -> np.ndarray:
    """Exact test that no binary vector v makes c_i + sum_j W_ij v_j vanish.

    Returns a boolean per neuron (True = no such v, the firing argument of
    neuron i can never sit exactly on the threshold under saturated inputs).
    Meet-in-the-middle over subset sums, exact up to n = 25; beyond that use
    check_c_assumption_sampled.
    """
    c = np.asarray(c, dtype=float)
    n = w.n
    if c.shape != (n,):
        raise ConfigError(f"c must have shape ({n},)")
    if n > 25:
        raise ConfigError(
            "exact subset-sum check limited to n <= 25; "
            "use check_c_assumption_sampled for larger networks"
        )
    half = n // 2
    ok = np.empty(n, dtype=bool)
    for i in range(n):
        row = w.w[i]
        sums_a = _subset_sums(row[:half])
        sums_b = np.sort(_subset_sums(row[half:]))
        targets = -c[i] - sums_a
        lo = np.searchsorted(sums_b, targets - tol, side="left")
        hi = np.searchsorted(sums_b, targets + tol, side="right")
        ok[i] = not np.any(hi > lo)
    return ok


def check_c_assumption_sampled(
    w: ConnectivityMatrix,
    c,
    num_samples: int = 1_000_000,
    seed: int = 0,
    tol: float = 1e-9,
) -> np.ndarray:
    """Randomized variant for large n: True means no violating binary vector
    was found among num_samples draws (evidence, not proof)."""
    c = np.asarray(c, dtype=float)
    n = w.n
    if c.shape != (n,):
        raise ConfigError(f"c must have shape ({n},)")
    gen = np.random.Generator(np.random.Philox(key=np.array([seed, 0], dtype=np.uint64)))
    ok = np.ones(n, dtype=bool)
    chunk = max(1, int(2_000_000 / max(1, n)))
    remaining = num_samples
    while remaining > 0:
        k = min(chunk, remaining)
        v = gen.integers(0, 2, size=(k, n)).astype(float)
        sums = v @ w.w.T  # (k, n): column i is sum_j W_ij v_j
        ok &= ~np.any(np.abs(sums + c[None, :]) <= tol, axis=0)
        remaining -= k
    return ok
