"""Directed neighbour relations between marked points.

A relation must be reflexive but need not be symmetric: ``u ~ v`` reads
"v is a directed neighbour of u".
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import ArgumentError
from .geometry import MarkedPoint, PointSequence


@dataclass(frozen=True)
class NeighbourRelation:
    predicate: Callable[[MarkedPoint, MarkedPoint], bool]
    symmetric: bool
    name: str = ""

    def __call__(self, u: MarkedPoint, v: MarkedPoint) -> bool:
        return self.predicate(u, v)


def directed_neighbours(
    relation: NeighbourRelation, u: MarkedPoint, seq: PointSequence
) -> list[int]:
    """1-based positions i with u ~ y_i, in increasing order."""
    return [i + 1 for i, p in enumerate(seq) if relation(u, p)]


def trivial_relation() -> NeighbourRelation:
    """Every pair of points is related."""
    return NeighbourRelation(lambda u, v: True, symmetric=True, name="trivial")


def identity_relation() -> NeighbourRelation:
    """Only coincident points are related (the minimal reflexive relation)."""
    return NeighbourRelation(lambda u, v: u == v, symmetric=True, name="identity")


def ball_relation(r: float) -> NeighbourRelation:
    """u ~ v iff their locations are within distance r."""
    if r < 0:
        raise ArgumentError("ball relation needs r >= 0")

    def pred(u, v):
        return math.hypot(u.x - v.x, u.y - v.y) <= r

    return NeighbourRelation(pred, symmetric=True, name=f"ball({r})")


def _radius(p: MarkedPoint) -> float:
    if not isinstance(p.mark, (int, float)):
        raise ArgumentError(f"territory relations need radius marks, got {p.mark!r}")
    return float(p.mark)


def settler_territory_relation() -> NeighbourRelation:
    """u ~ v iff u's location lies in v's territory (radius = v's mark)."""

    def pred(u, v):
        return math.hypot(u.x - v.x, u.y - v.y) <= _radius(v)

    return NeighbourRelation(pred, symmetric=False, name="settler-territory")


def invader_territory_relation() -> NeighbourRelation:
    """u ~ v iff v lies within u's own claimed radius (u's mark)."""

    def pred(u, v):
        return math.hypot(u.x - v.x, u.y - v.y) <= _radius(u)

    return NeighbourRelation(pred, symmetric=False, name="invader-territory")


def mark_range_relation(range_fn: Callable) -> NeighbourRelation:
    """u ~ v iff their distance is at most range_fn(u.mark, v.mark)."""

    def pred(u, v):
        return math.hypot(u.x - v.x, u.y - v.y) <= range_fn(u.mark, v.mark)

    return NeighbourRelation(pred, symmetric=False, name="mark-range")
