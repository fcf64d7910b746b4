"""Interaction-free reference model with density beta^n.

Its equilibrium sequence law under the samplers has Poisson(beta * area)
length, which makes it the analytic sanity check for everything else.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from ..density import NEG_INF
from ..errors import ArgumentError
from ..geometry import MarkedPoint, PointSequence, Window, _position
from ..marks import NO_MARKS, MarkDistribution
from ..relations import NeighbourRelation, identity_relation


@dataclass(frozen=True)
class PoissonModel:
    window: Window
    beta: float = 1.0
    marks: MarkDistribution = NO_MARKS

    def __post_init__(self):
        if self.beta <= 0:
            raise ArgumentError("beta must be positive")

    @property
    def relation(self) -> NeighbourRelation:
        return identity_relation()

    @property
    def local_stability_bound(self) -> float:
        return self.beta

    def log_density(self, seq: PointSequence) -> float:
        for p in seq:
            if not self.window.contains(p.x, p.y):
                return NEG_INF
        return len(seq) * math.log(self.beta)

    def log_insert_ratio_arrays(self, xs, ys, ms, n, slot, x, y, m) -> float:
        if not self.window.contains(x, y):
            return NEG_INF
        return math.log(self.beta)

    def log_delete_ratio_arrays(self, xs, ys, ms, n, slot) -> float:
        return -math.log(self.beta)

    def log_insert_ratio(self, seq: PointSequence, i: int, u: MarkedPoint) -> float:
        _position(i, 1, len(seq) + 1, "insert")
        if not self.window.contains(u.x, u.y):
            return NEG_INF
        return math.log(self.beta)

    def log_delete_ratio(self, seq: PointSequence, i: int) -> float:
        _position(i, 1, len(seq), "remove")
        return -math.log(self.beta)
