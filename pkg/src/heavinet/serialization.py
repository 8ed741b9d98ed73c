"""File formats shared with other tools.

Schedules travel as JSON ({"n", "T", "intervals"}), matrices as CSV with one
matrix row per line and 17 significant digits (lossless float round trip),
reports and configs as JSON. Downstream consumers (plotting, external
analysis) read only these files, never package internals.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Optional, Tuple

import numpy as np

from .core import (
    ConnectivityMatrix,
    ConstantInput,
    FiringSchedule,
    PiecewiseConstantInput,
    TabulatedInput,
)
from .errors import ConfigError
from .noise import NoiseSpec

__all__ = [
    "save_schedule",
    "load_schedule",
    "save_matrix_csv",
    "load_matrix_csv",
    "load_connectivity",
    "save_json",
    "load_json",
    "parse_inputs",
    "inputs_to_json",
    "parse_noise",
    "save_spectra_csv",
]


def save_json(path, payload: dict) -> None:
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def load_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise ConfigError(f"file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}")


def save_schedule(path, schedule: FiringSchedule, source_onsets=None) -> None:
    """Schedule JSON; source_onsets (per-neuron clean onsets paired with each
    interval, produced by interval noise) is an optional extra field."""
    payload = {
        "n": schedule.n,
        "T": schedule.horizon,
        "intervals": [[[a, b] for a, b in per] for per in schedule.intervals],
    }
    if source_onsets is not None:
        payload["source_onsets"] = [list(map(float, arr)) for arr in source_onsets]
    save_json(path, payload)


def load_schedule(path) -> Tuple[FiringSchedule, Optional[Tuple[np.ndarray, ...]]]:
    d = load_json(path)
    try:
        schedule = FiringSchedule(
            n=int(d["n"]),
            horizon=float(d["T"]),
            intervals=tuple(
                tuple((float(a), float(b)) for a, b in per) for per in d["intervals"]
            ),
        )
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"malformed schedule file {path}: {exc}")
    pairing = None
    if "source_onsets" in d:
        pairing = tuple(np.asarray(per, dtype=float) for per in d["source_onsets"])
        if len(pairing) != schedule.n:
            raise ConfigError("source_onsets length does not match n")
    return schedule, pairing


def save_matrix_csv(path, matrix) -> None:
    arr = np.atleast_2d(np.asarray(matrix, dtype=float))
    np.savetxt(path, arr, fmt="%.17g", delimiter=",")


def load_matrix_csv(path) -> np.ndarray:
    try:
        return np.loadtxt(path, delimiter=",", ndmin=2)
    except FileNotFoundError:
        raise ConfigError(f"file not found: {path}")
    except ValueError as exc:
        raise ConfigError(f"malformed matrix CSV {path}: {exc}")


def load_connectivity(path) -> ConnectivityMatrix:
    """Matrix from CSV, or from JSON holding either a nested list or {"w": ...}."""
    p = Path(path)
    if p.suffix.lower() == ".json":
        d = load_json(p)
        w = d["w"] if isinstance(d, dict) else d
        return ConnectivityMatrix(np.asarray(w, dtype=float))
    return ConnectivityMatrix(load_matrix_csv(p))


def parse_inputs(raw, n: int):
    """Inputs field: a number (shared constant), a list of numbers, or a list
    of {"kind": ...} objects."""
    if isinstance(raw, (int, float)):
        return tuple(ConstantInput(float(raw)) for _ in range(n))
    if not isinstance(raw, list) or len(raw) != n:
        raise ConfigError(f"inputs must be a number or a list of length {n}")
    out = []
    for item in raw:
        if isinstance(item, (int, float)):
            out.append(ConstantInput(float(item)))
            continue
        kind = item.get("kind")
        if kind == "constant":
            out.append(ConstantInput(float(item["value"])))
        elif kind == "piecewise":
            out.append(
                PiecewiseConstantInput(
                    breakpoints=tuple(item["breakpoints"]),
                    values=tuple(item["values"]),
                )
            )
        elif kind == "tabulated":
            out.append(
                TabulatedInput(
                    times=tuple(item["times"]),
                    values=tuple(item["values"]),
                    interpolation=item.get("interpolation", "hold"),
                )
            )
        else:
            raise ConfigError(f"unknown input kind {kind!r}")
    return tuple(out)


def inputs_to_json(inputs):
    out = []
    for inp in inputs:
        if isinstance(inp, ConstantInput):
            out.append({"kind": "constant", "value": inp.value})
        elif isinstance(inp, PiecewiseConstantInput):
            out.append(
                {
                    "kind": "piecewise",
                    "breakpoints": list(inp.breakpoints),
                    "values": list(inp.values),
                }
            )
        elif isinstance(inp, TabulatedInput):
            out.append(
                {
                    "kind": "tabulated",
                    "times": list(inp.times),
                    "values": list(inp.values),
                    "interpolation": inp.interpolation,
                }
            )
        else:
            raise ConfigError(f"unknown input type {type(inp).__name__}")
    return out


def parse_noise(raw) -> Optional[NoiseSpec]:
    if raw is None:
        return None
    try:
        return NoiseSpec(
            target=raw["target"], level=float(raw["level"]), seed=int(raw["seed"])
        )
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"malformed noise spec: {exc}")


def save_spectra_csv(path, spectra) -> None:
    """Rows (neuron, m, sigma_m) for a collection of per-neuron spectra."""
    rows = []
    for neuron, sigma in spectra:
        for m, s in enumerate(sigma, start=1):
            rows.append((neuron, m, s))
    with open(path, "w") as fh:
        fh.write("neuron,m,sigma\n")
        for neuron, m, s in rows:
            fh.write(f"{neuron},{m},{s:.17g}\n")
