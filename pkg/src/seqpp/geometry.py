"""Planar windows, marked points, and ordered point sequences.

An ordered sequence is the fundamental state of this library: two
sequences holding the same points in different order are different
states, unlike the point-set configurations of classical spatial
statistics.  Positions in all public interfaces are 1-based.
"""
from __future__ import annotations

import math
import operator
from dataclasses import dataclass
from typing import Iterable, Iterator, Union

from .errors import ArgumentError

Mark = Union[None, float, str]


@dataclass(frozen=True)
class Window:
    """Axis-aligned rectangle carrying Lebesgue area measure."""

    x0: float
    y0: float
    x1: float
    y1: float

    def __post_init__(self):
        if not (self.x1 > self.x0 and self.y1 > self.y0):
            raise ArgumentError(f"window must have positive extent, got {self}")

    @property
    def width(self) -> float:
        return self.x1 - self.x0

    @property
    def height(self) -> float:
        return self.y1 - self.y0

    @property
    def area(self) -> float:
        return self.width * self.height

    def contains(self, x: float, y: float) -> bool:
        return self.x0 <= x <= self.x1 and self.y0 <= y <= self.y1

    def grid_centres(self, nx: int, ny: int) -> list[tuple[float, float]]:
        """Centres of an nx-by-ny partition into equal rectangles, row-major."""
        if nx < 1 or ny < 1:
            raise ArgumentError("grid dimensions must be positive")
        dx = self.width / nx
        dy = self.height / ny
        return [
            (self.x0 + (i + 0.5) * dx, self.y0 + (j + 0.5) * dy)
            for j in range(ny)
            for i in range(nx)
        ]


UNIT_WINDOW = Window(0.0, 0.0, 1.0, 1.0)


@dataclass(frozen=True)
class MarkedPoint:
    """A planar location with an optional mark (radius or type label)."""

    x: float
    y: float
    mark: Mark = None


def distance(u: MarkedPoint, v: MarkedPoint) -> float:
    return math.hypot(u.x - v.x, u.y - v.y)


class PointSequence:
    """Immutable ordered list of marked points; equality is positional."""

    __slots__ = ("_points",)

    def __init__(self, points: Iterable[MarkedPoint] = ()):
        object.__setattr__(self, "_points", tuple(points))

    @property
    def points(self) -> tuple[MarkedPoint, ...]:
        return self._points

    def __len__(self) -> int:
        return len(self._points)

    def __iter__(self) -> Iterator[MarkedPoint]:
        return iter(self._points)

    def __getitem__(self, idx):
        return self._points[idx]

    def __eq__(self, other) -> bool:
        if not isinstance(other, PointSequence):
            return NotImplemented
        return self._points == other._points

    def __hash__(self) -> int:
        return hash(self._points)

    def __repr__(self) -> str:
        return f"PointSequence({list(self._points)!r})"


EMPTY = PointSequence()


def _position(i, lo: int, hi: int, what: str) -> int:
    try:
        i = operator.index(i)
    except TypeError:
        raise ArgumentError(f"{what} position must be an integer, got {i!r}")
    if not lo <= i <= hi:
        raise ArgumentError(f"{what} position {i} out of range {lo}..{hi}")
    return i


def insert_at(seq: PointSequence, i: int, u: MarkedPoint) -> PointSequence:
    """New sequence with u at 1-based position i (i = n+1 appends)."""
    n = len(seq)
    i = _position(i, 1, n + 1, "insert")
    pts = seq.points
    return PointSequence(pts[: i - 1] + (u,) + pts[i - 1 :])


def remove_at(seq: PointSequence, i: int) -> PointSequence:
    """New sequence without the point at 1-based position i."""
    n = len(seq)
    if n == 0:
        raise ArgumentError("cannot remove from an empty sequence")
    i = _position(i, 1, n, "remove")
    pts = seq.points
    return PointSequence(pts[: i - 1] + pts[i:])


def _mark_key(mark: Mark) -> tuple:
    # Rank first so mixed mark types never get compared directly.
    if mark is None:
        return (0, 0.0)
    if isinstance(mark, str):
        return (2, mark)
    return (1, float(mark))


def point_key(p: MarkedPoint) -> tuple:
    """Sortable identity of a marked point (exact coordinate equality)."""
    return (p.x, p.y, _mark_key(p.mark))


def multiset_key(points: Iterable[MarkedPoint]) -> tuple:
    """Canonical order-free key of a point multiset (repeats retained)."""
    return tuple(sorted(point_key(p) for p in points))
