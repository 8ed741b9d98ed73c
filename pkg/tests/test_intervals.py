import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heavinet import (
    IntervalSet,
    interval_intersection,
    interval_symmetric_difference_measure,
    interval_union,
    schedule_distance,
)


def test_construction_normalizes():
    s = IntervalSet([(2.0, 3.0), (0.0, 1.0), (0.5, 1.5)])
    assert np.allclose(s.spans, [(0.0, 1.5), (2.0, 3.0)])
    assert len(s) == 2
    assert s.measure == pytest.approx(2.5)


def test_touching_intervals_merge():
    s = IntervalSet([(0.0, 1.0), (1.0, 2.0)])
    assert len(s) == 1
    assert s.measure == pytest.approx(2.0)


def test_zero_length_allowed():
    s = IntervalSet([(1.0, 1.0)])
    assert s.measure == 0.0
    assert s.contains(1.0)
    assert not s.contains(1.0 + 1e-6)


def test_empty_set():
    s = IntervalSet()
    assert s.measure == 0.0
    assert len(s) == 0
    assert not s.contains(0.0)


def test_invalid_spans_rejected():
    with pytest.raises(ValueError):
        IntervalSet([(1.0, 0.0)])
    with pytest.raises(ValueError):
        IntervalSet([(0.0, np.inf)])
    with pytest.raises(ValueError):
        IntervalSet([(0.0, 1.0, 2.0)])


def test_equality_and_hash_are_representation_independent():
    a = IntervalSet([(0.0, 1.0), (1.0, 2.0)])
    b = IntervalSet([(0.0, 2.0)])
    assert a == b
    assert hash(a) == hash(b)
    assert a != IntervalSet([(0.0, 2.5)])


def test_contains():
    s = IntervalSet([(0.0, 1.0), (2.0, 3.0)])
    assert s.contains(0.0) and s.contains(1.0) and s.contains(2.5)
    assert not s.contains(1.5)
    assert not s.contains(-0.1)


def test_union_and_intersection():
    a = IntervalSet([(0.0, 2.0), (4.0, 6.0)])
    b = IntervalSet([(1.0, 5.0)])
    u = interval_union(a, b)
    i = interval_intersection(a, b)
    assert np.allclose(u.spans, [(0.0, 6.0)])
    assert np.allclose(i.spans, [(1.0, 2.0), (4.0, 5.0)])


def test_intersection_disjoint_is_empty():
    a = IntervalSet([(0.0, 1.0)])
    b = IntervalSet([(2.0, 3.0)])
    assert interval_intersection(a, b).measure == 0.0


def test_symmetric_difference_hand_case():
    a = IntervalSet([(0.0, 2.0)])
    b = IntervalSet([(1.0, 3.0)])
    # [0,1) on one side, (2,3] on the other
    assert interval_symmetric_difference_measure(a, b) == pytest.approx(2.0)


def test_schedule_distance_is_sup_over_neurons():
    a = [[(0.0, 1.0)], [(0.0, 4.0)]]
    b = [[(0.0, 1.5)], [(0.0, 1.0)]]
    assert schedule_distance(a, b) == pytest.approx(3.0)
    with pytest.raises(ValueError):
        schedule_distance(a, [[(0.0, 1.0)]])


spans_strategy = st.lists(
    st.tuples(
        st.floats(min_value=-50.0, max_value=50.0),
        st.floats(min_value=0.0, max_value=20.0),
    ),
    max_size=6,
).map(lambda pairs: IntervalSet([(a, a + w) for a, w in pairs]))


@given(a=spans_strategy, b=spans_strategy, c=spans_strategy)
@settings(max_examples=200, deadline=None)
def test_metric_axioms(a, b, c):
    d = interval_symmetric_difference_measure
    assert d(a, a) == 0.0
    assert d(a, b) == d(b, a)
    assert d(a, c) <= d(a, b) + d(b, c) + 1e-9


@given(a=spans_strategy)
@settings(max_examples=100, deadline=None)
def test_zero_length_padding_is_measure_invisible(a):
    padded = interval_union(a, IntervalSet([(7.0, 7.0)]))
    assert interval_symmetric_difference_measure(a, padded) == 0.0
