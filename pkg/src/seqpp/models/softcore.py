"""Sequential soft-core model: settlers claim territories, newcomers pay.

Unnormalised density beta^n * prod_i gamma^(number of earlier territories
covering point i).  With the default "settler" variant the territory
radius is the earlier point's mark; the "invader" variant uses the later
point's own mark instead.  gamma = 0 is the hard-territory limit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .. import kernels
from ..density import NEG_INF
from ..errors import ArgumentError
from ..geometry import MarkedPoint, PointSequence, Window, _position
from ..marks import MarkDistribution
from ..relations import (
    NeighbourRelation,
    invader_territory_relation,
    settler_territory_relation,
)

_VARIANTS = ("settler", "invader")


def _arrays(seq: PointSequence):
    n = len(seq)
    xs = np.empty(n)
    ys = np.empty(n)
    ms = np.empty(n)
    for j, p in enumerate(seq):
        if not isinstance(p.mark, (int, float)) or p.mark <= 0:
            raise ArgumentError(f"soft-core points need a positive radius mark, got {p.mark!r}")
        xs[j] = p.x
        ys[j] = p.y
        ms[j] = p.mark
    return xs, ys, ms, n


@dataclass(frozen=True)
class SoftCoreModel:
    window: Window
    beta: float
    gamma: float
    marks: MarkDistribution
    variant: str = "settler"

    def __post_init__(self):
        if self.beta <= 0:
            raise ArgumentError("beta must be positive")
        if not 0.0 <= self.gamma < 1.0:
            raise ArgumentError("gamma must lie in [0, 1)")
        if self.variant not in _VARIANTS:
            raise ArgumentError(f"variant must be one of {_VARIANTS}")
        if self.marks.kind != "radius":
            raise ArgumentError("soft-core models need radius marks")

    @property
    def relation(self) -> NeighbourRelation:
        if self.variant == "settler":
            return settler_territory_relation()
        return invader_territory_relation()

    @property
    def local_stability_bound(self) -> float:
        # every insertion multiplies the density by beta * gamma^k <= beta
        return self.beta

    def _gamma_term(self, count: int) -> float:
        if count == 0:
            return 0.0
        if self.gamma == 0.0:
            return NEG_INF
        return count * math.log(self.gamma)

    def log_density(self, seq: PointSequence) -> float:
        xs, ys, ms, n = _arrays(seq)
        for j in range(n):
            if not self.window.contains(xs[j], ys[j]):
                return NEG_INF
        count = kernels.softcore_total_count(xs, ys, ms, n, self.variant == "invader")
        return n * math.log(self.beta) + self._gamma_term(count)

    # -- closed-form ratio fast paths used by the samplers ----------------

    def log_insert_ratio_arrays(self, xs, ys, ms, n, slot, x, y, m) -> float:
        if not self.window.contains(x, y):
            return NEG_INF
        count = kernels.softcore_insert_count(
            xs, ys, ms, n, slot, x, y, m, self.variant == "invader"
        )
        return math.log(self.beta) + self._gamma_term(count)

    def log_delete_ratio_arrays(self, xs, ys, ms, n, slot) -> float:
        count = kernels.softcore_delete_count(
            xs, ys, ms, n, slot, self.variant == "invader"
        )
        return -(math.log(self.beta) + self._gamma_term(count))

    def log_insert_ratio(self, seq: PointSequence, i: int, u: MarkedPoint) -> float:
        xs, ys, ms, n = _arrays(seq)
        if not isinstance(u.mark, (int, float)) or u.mark <= 0:
            raise ArgumentError(f"soft-core points need a positive radius mark, got {u.mark!r}")
        i = _position(i, 1, n + 1, "insert")
        return self.log_insert_ratio_arrays(xs, ys, ms, n, i - 1, u.x, u.y, float(u.mark))

    def log_delete_ratio(self, seq: PointSequence, i: int) -> float:
        xs, ys, ms, n = _arrays(seq)
        i = _position(i, 1, n, "remove")
        return self.log_delete_ratio_arrays(xs, ys, ms, n, i - 1)


def softcore_log_density(model: SoftCoreModel, seq: PointSequence) -> float:
    """Unnormalised log density n log beta + (covering count) log gamma."""
    return model.log_density(seq)


def softcore_conditional_intensity(
    model: SoftCoreModel, seq: PointSequence, u: MarkedPoint
) -> float:
    """Closed-form append intensity beta * gamma^k / (n+1).

    k counts the territories covering u (settler variant) or the points
    inside u's own claim (invader variant); must agree with the generic
    insertion intensity at position n+1.
    """
    ratio = model.log_insert_ratio(seq, len(seq) + 1, u)
    if ratio == NEG_INF:
        return 0.0
    return math.exp(ratio - math.log(len(seq) + 1))
