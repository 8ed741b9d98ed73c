"""Figures for network-inversion runs.

Three figure kinds: a connectivity heatmap, a difference heatmap between a
recovered and a reference matrix, and a singular-value spectrum on log axes
with algebraic and exponential decay fits overlaid.

Input is strictly the CSV files the simulation/inversion CLI writes (plain
numeric matrices, and neuron/m/sigma spectra tables). This package never
imports that library.
"""

from .jobs import FigureJob, JobError
from .render import render

__all__ = ["FigureJob", "JobError", "render"]
