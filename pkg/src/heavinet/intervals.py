"""Finite unions of closed intervals with exact measure arithmetic.

Firing schedules are compared through the measure of symmetric differences,
so the set algebra here only needs unions, intersections, and measures; all
of it reduces to endpoint sweeps over normalized interval lists.
"""

from __future__ import annotations

from typing import Iterable, Sequence, Tuple

import numpy as np

__all__ = [
    "IntervalSet",
    "interval_union",
    "interval_intersection",
    "interval_symmetric_difference_measure",
    "schedule_distance",
]


def _merge_tolerance(spans: np.ndarray) -> float:
    # Absorbs float rounding at the scale of the largest endpoint; with
    # endpoints spanning a horizon T this is 1e-12 * max(1, T).
    if spans.size == 0:
        return 0.0
    return 1e-12 * max(1.0, float(np.max(np.abs(spans))))


class IntervalSet:
    """Normalized finite union of closed intervals [a, b] with a <= b.

    Construction sorts the spans and merges any pair closer than the rounding
    tolerance, so two sets describing the same point set compare equal entry
    by entry. Zero-length intervals are allowed (they carry no measure).
    """

    __slots__ = ("spans",)

    def __init__(self, spans: Iterable[Sequence[float]] = ()):
        arr = np.asarray(list(spans), dtype=float)
        if arr.size == 0:
            self.spans = np.empty((0, 2), dtype=float)
            return
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise ValueError("spans must be pairs (start, end)")
        if not np.all(np.isfinite(arr)):
            raise ValueError("interval endpoints must be finite")
        if np.any(arr[:, 1] < arr[:, 0]):
            raise ValueError("interval end precedes start")
        order = np.argsort(arr[:, 0], kind="stable")
        arr = arr[order]
        tol = _merge_tolerance(arr)
        merged = [arr[0].copy()]
        for start, end in arr[1:]:
            if start <= merged[-1][1] + tol:
                merged[-1][1] = max(merged[-1][1], end)
            else:
                merged.append(np.array([start, end]))
        self.spans = np.array(merged, dtype=float)
        self.spans.flags.writeable = False

    @property
    def measure(self) -> float:
        if self.spans.size == 0:
            return 0.0
        return float(np.sum(self.spans[:, 1] - self.spans[:, 0]))

    def __len__(self) -> int:
        return self.spans.shape[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntervalSet):
            return NotImplemented
        return self.spans.shape == other.spans.shape and bool(
            np.array_equal(self.spans, other.spans)
        )

    def __hash__(self):
        return hash(self.spans.tobytes())

    def __repr__(self) -> str:
        inner = ", ".join(f"[{a:g}, {b:g}]" for a, b in self.spans)
        return f"IntervalSet({inner})"

    def contains(self, t: float) -> bool:
        if self.spans.size == 0:
            return False
        idx = np.searchsorted(self.spans[:, 0], t, side="right") - 1
        return idx >= 0 and t <= self.spans[idx, 1]


def interval_union(a: IntervalSet, b: IntervalSet) -> IntervalSet:
    return IntervalSet(np.concatenate([a.spans, b.spans], axis=0))


def interval_intersection(a: IntervalSet, b: IntervalSet) -> IntervalSet:
    """Intersection by a two-pointer sweep over the normalized spans."""
    out = []
    i = j = 0
    sa, sb = a.spans, b.spans
    while i < len(sa) and j < len(sb):
        lo = max(sa[i, 0], sb[j, 0])
        hi = min(sa[i, 1], sb[j, 1])
        if lo <= hi:
            out.append((lo, hi))
        if sa[i, 1] < sb[j, 1]:
            i += 1
        else:
            j += 1
    return IntervalSet(out)


def interval_symmetric_difference_measure(a: IntervalSet, b: IntervalSet) -> float:
    """Lebesgue measure of the symmetric difference of two interval sets.

    |A| + |B| - 2|A & B| equals |A \\ B| + |B \\ A| exactly; the subtraction
    can go fractionally negative in floats, hence the clamp.
    """
    inter = interval_intersection(a, b)
    return max(0.0, a.measure + b.measure - 2.0 * inter.measure)


def schedule_distance(
    intervals_a: Sequence[Sequence[Tuple[float, float]]],
    intervals_b: Sequence[Sequence[Tuple[float, float]]],
) -> float:
    """sup over neurons of the symmetric-difference measure of their intervals."""
    if len(intervals_a) != len(intervals_b):
        raise ValueError("schedules have different neuron counts")
    worst = 0.0
    for per_a, per_b in zip(intervals_a, intervals_b):
        d = interval_symmetric_difference_measure(
            IntervalSet(per_a), IntervalSet(per_b)
        )
        worst = max(worst, d)
    return worst
