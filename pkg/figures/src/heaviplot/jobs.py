"""Figure job descriptions."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

KINDS = ("heatmap", "diff_heatmap", "spectrum")
COLOR_SCALES = ("shared_symmetric_about_zero", "auto")
OUTPUT_SUFFIXES = (".png", ".svg")


class JobError(Exception):
    """Bad job description or unusable input file."""


@dataclass(frozen=True)
class FigureJob:
    """One figure to render.

    path2 is only meaningful for diff_heatmap, where the rendered data is
    matrix(path) - matrix(path2); both matrices must have the same shape.
    """

    kind: str
    path: Path
    out: Path
    path2: Path | None = None
    color_scale: str = "shared_symmetric_about_zero"
    title: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise JobError(f"unknown figure kind {self.kind!r}, expected one of {KINDS}")
        if self.color_scale not in COLOR_SCALES:
            raise JobError(f"unknown color scale {self.color_scale!r}")
        object.__setattr__(self, "path", Path(self.path))
        object.__setattr__(self, "out", Path(self.out))
        if self.path2 is not None:
            object.__setattr__(self, "path2", Path(self.path2))
        if self.kind == "diff_heatmap" and self.path2 is None:
            raise JobError("diff_heatmap needs a second input matrix")
        if self.out.suffix.lower() not in OUTPUT_SUFFIXES:
            raise JobError(f"output must end in {OUTPUT_SUFFIXES}, got {self.out.name!r}")
