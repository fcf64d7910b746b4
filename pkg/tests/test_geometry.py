import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from seqpp import ArgumentError, MarkedPoint, PointSequence, Window, insert_at, remove_at
from seqpp.geometry import EMPTY, multiset_key, point_key

A = MarkedPoint(0.1, 0.2, 1.0)
B = MarkedPoint(0.3, 0.4, 2.0)
U = MarkedPoint(0.5, 0.6, 0.5)


def test_insert_prefix():
    assert insert_at(PointSequence([A, B]), 1, U) == PointSequence([U, A, B])


def test_insert_append():
    assert insert_at(PointSequence([A, B]), 3, U) == PointSequence([A, B, U])


def test_insert_empty():
    assert insert_at(EMPTY, 1, U) == PointSequence([U])


def test_insert_out_of_range():
    with pytest.raises(ArgumentError):
        insert_at(PointSequence([A]), 3, U)
    with pytest.raises(ArgumentError):
        insert_at(PointSequence([A]), 0, U)


def test_remove_middle():
    c = MarkedPoint(0.7, 0.8)
    assert remove_at(PointSequence([A, B, c]), 2) == PointSequence([A, c])


def test_remove_to_empty():
    assert remove_at(PointSequence([A]), 1) == EMPTY


def test_remove_errors():
    with pytest.raises(ArgumentError):
        remove_at(EMPTY, 1)
    with pytest.raises(ArgumentError):
        remove_at(PointSequence([A]), 2)


def test_insert_remove_inverse_pair():
    s = PointSequence([A, B])
    assert remove_at(insert_at(s, 2, U), 2) == s


points = st.builds(
    MarkedPoint,
    st.floats(-5, 5, allow_nan=False),
    st.floats(-5, 5, allow_nan=False),
    st.one_of(st.none(), st.floats(0.01, 3, allow_nan=False)),
)


@given(st.lists(points, max_size=6), points, st.data())
def test_insert_remove_inversion_property(pts, u, data):
    seq = PointSequence(pts)
    i = data.draw(st.integers(1, len(seq) + 1))
    assert remove_at(insert_at(seq, i, u), i) == seq


def test_sequence_equality_is_positional():
    assert PointSequence([A, B]) != PointSequence([B, A])
    assert len(PointSequence([A, B])) == 2
    assert list(PointSequence([A, B])) == [A, B]


def test_multiset_key_order_free_and_repeat_aware():
    assert multiset_key([A, B]) == multiset_key([B, A])
    assert multiset_key([A, A]) != multiset_key([A])
    assert point_key(A) < point_key(B)


def test_window_basics():
    w = Window(0, 0, 2, 1)
    assert w.area == 2.0
    assert w.contains(2.0, 1.0)
    assert not w.contains(2.1, 0.5)
    assert len(w.grid_centres(2, 2)) == 4
    with pytest.raises(ArgumentError):
        Window(0, 0, 0, 1)


def test_distance():
    from seqpp.geometry import distance

    assert math.isclose(distance(MarkedPoint(0, 0), MarkedPoint(3, 4)), 5.0)
