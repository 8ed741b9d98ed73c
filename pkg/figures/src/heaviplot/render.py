"""Rendering, one figure per call.

Heatmaps follow the indexing convention of the experiment output: entry
(i, j) is drawn at x=i, y=j. imshow puts rows on the y axis, hence the
transpose and the lower-left origin.
"""

from __future__ import annotations

import warnings

import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .jobs import FigureJob, JobError

__all__ = ["render", "load_matrix", "load_spectra"]


def load_matrix(path) -> np.ndarray:
    """Headerless comma-separated numeric matrix."""
    try:
        return np.loadtxt(path, delimiter=",", ndmin=2)
    except FileNotFoundError:
        raise JobError(f"file not found: {path}")
    except ValueError as exc:
        raise JobError(f"malformed matrix CSV {path}: {exc}")


def load_spectra(path) -> dict[int, tuple[np.ndarray, np.ndarray]]:
    """Spectra table with a neuron,m,sigma header; returns {neuron: (m, sigma)}."""
    try:
        with warnings.catch_warnings():
            # empty tables are reported as JobError below, not as a warning
            warnings.simplefilter("ignore", UserWarning)
            raw = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    except FileNotFoundError:
        raise JobError(f"file not found: {path}")
    except ValueError as exc:
        raise JobError(f"malformed spectra CSV {path}: {exc}")
    if raw.size == 0:
        raise JobError(f"no spectrum rows in {path}")
    if raw.shape[1] != 3:
        raise JobError(f"expected neuron,m,sigma columns in {path}, got {raw.shape[1]}")
    per = {}
    for neuron in np.unique(raw[:, 0]).astype(int):
        rows = raw[raw[:, 0] == neuron]
        order = np.argsort(rows[:, 1])
        per[int(neuron)] = (rows[order, 1], rows[order, 2])
    return per


def _fit_decay(m: np.ndarray, sigma: np.ndarray) -> dict:
    """Log-space least squares for C*m**-alpha and C*exp(-alpha*m).

    Values below max(sigma)*1e-14 are rounding noise on a log axis and are
    left out of both fits.
    """
    top = float(np.max(sigma)) if sigma.size else 0.0
    keep = (sigma > top * 1e-14) & (sigma > 0.0) & (m > 0.0)
    if keep.sum() < 2:
        raise JobError("spectrum too short to fit decay laws (need 2 positive values)")
    logs = np.log(sigma[keep])
    alg = np.polyfit(np.log(m[keep]), logs, 1)
    expo = np.polyfit(m[keep], logs, 1)
    return {
        "c_algebraic": float(np.exp(alg[1])),
        "alpha_algebraic": float(-alg[0]),
        "c_exponential": float(np.exp(expo[1])),
        "alpha_exponential": float(-expo[0]),
    }


def _scale(data: np.ndarray, mode: str) -> tuple[float | None, float | None]:
    if mode == "shared_symmetric_about_zero":
        lim = float(np.max(np.abs(data))) if data.size else 0.0
        if lim == 0.0:
            lim = 1.0  # flat matrix, keep a usable colorbar
        return -lim, lim
    return None, None


def _render_matrix(data: np.ndarray, job: FigureJob, fig, ax) -> dict:
    vmin, vmax = _scale(data, job.color_scale)
    im = ax.imshow(
        data.T,
        origin="lower",
        cmap="RdBu_r",
        vmin=vmin,
        vmax=vmax,
        interpolation="nearest",
        aspect="equal",
    )
    ax.set_xlabel("i")
    ax.set_ylabel("j")
    fig.colorbar(im, ax=ax)
    lo, hi = im.get_clim()
    return {
        "shape": tuple(data.shape),
        "vmin": float(lo),
        "vmax": float(hi),
        "xlabel": "i",
        "ylabel": "j",
    }


def _render_diff(job: FigureJob, fig, ax) -> dict:
    a = load_matrix(job.path)
    b = load_matrix(job.path2)
    if a.shape != b.shape:
        raise JobError(f"shape mismatch: {a.shape} vs {b.shape}")
    return _render_matrix(a - b, job, fig, ax)


def _render_spectrum(job: FigureJob, fig, ax) -> dict:
    per = load_spectra(job.path)
    for m, sigma in per.values():
        ax.semilogy(m, sigma, color="0.82", lw=0.7, zorder=1)
    # pool by m so neurons with different spectrum lengths still contribute
    pool: dict[float, list[float]] = {}
    for m, sigma in per.values():
        for mi, si in zip(m, sigma):
            pool.setdefault(float(mi), []).append(float(si))
    ms = np.array(sorted(pool))
    med = np.array([np.median(pool[mi]) for mi in ms])
    fit = _fit_decay(ms, med)
    ax.semilogy(ms, med, "k.-", lw=1.2, ms=4, zorder=3, label=r"$\sigma_m$ (median)")
    ax.semilogy(
        ms,
        fit["c_algebraic"] * ms ** -fit["alpha_algebraic"],
        "--",
        zorder=2,
        label=rf"$C\,m^{{-\alpha}}$, $\alpha$={fit['alpha_algebraic']:.2f}",
    )
    ax.semilogy(
        ms,
        fit["c_exponential"] * np.exp(-fit["alpha_exponential"] * ms),
        ":",
        zorder=2,
        label=rf"$C\,e^{{-\alpha m}}$, $\alpha$={fit['alpha_exponential']:.2f}",
    )
    ax.set_xlabel("m")
    ax.set_ylabel(r"$\sigma_m$")
    ax.legend()
    info = {"n_neurons": len(per), "curves": ["sigma", "algebraic", "exponential"]}
    info.update(fit)
    return info


def render(job: FigureJob) -> dict:
    """Render one figure and return a summary of what was drawn."""
    fig, ax = plt.subplots(figsize=(5.6, 4.6), dpi=140)
    try:
        if job.kind == "heatmap":
            info = _render_matrix(load_matrix(job.path), job, fig, ax)
        elif job.kind == "diff_heatmap":
            info = _render_diff(job, fig, ax)
        else:
            info = _render_spectrum(job, fig, ax)
        if job.title:
            ax.set_title(job.title)
        fig.savefig(job.out)
    finally:
        plt.close(fig)
    info["kind"] = job.kind
    info["out"] = str(job.out)
    return info
