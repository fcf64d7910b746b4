"""Pairwise interaction models: a bounded first-order term per point and a
[0, 1]-valued pair term for every (later, earlier) pair within range."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .. import kernels
from ..density import NEG_INF
from ..errors import ArgumentError, ModelContractError
from ..geometry import Mark, MarkedPoint, PointSequence, Window, _position
from ..marks import NO_MARKS, MarkDistribution
from ..relations import NeighbourRelation, mark_range_relation

_TOL = 1e-12


def quadratic_interaction(d: float, R: float) -> float:
    """Repulsion rising quadratically from 0 at contact to 1 at range R:
    1 - (1 - d^2/R^2)^2 for d <= R, and 1 beyond (continuous at d = R)."""
    if d >= R:
        return 1.0
    w = 1.0 - (d * d) / (R * R)
    return 1.0 - w * w


def _log_unit_interval(v: float, what: str) -> float:
    if math.isnan(v) or v < -_TOL or v > 1.0 + _TOL:
        raise ModelContractError(f"{what} value {v} falls outside [0, 1]")
    if v <= 0.0:
        return NEG_INF
    return math.log(min(v, 1.0))


@dataclass(frozen=True)
class PairwiseModel:
    window: Window
    marks: MarkDistribution
    first_order: Callable[[MarkedPoint], float]
    pair: Callable[[MarkedPoint, MarkedPoint], float]
    range_fn: Callable[[Mark, Mark], float]
    first_order_bound: float
    # (scale, mark_scaled) enables the compiled quadratic kernels; requires a
    # constant first-order term and the symmetric quadratic pair function.
    quad_params: tuple[float, bool] | None = None
    first_order_const: float | None = None

    def __post_init__(self):
        if self.first_order_bound <= 0:
            raise ArgumentError("first-order bound must be positive")

    @property
    def relation(self) -> NeighbourRelation:
        return mark_range_relation(self.range_fn)

    @property
    def local_stability_bound(self) -> float:
        # pair terms never exceed 1, so an insertion gains at most the
        # first-order bound
        return self.first_order_bound

    def _log_first_order(self, p: MarkedPoint) -> float:
        v = self.first_order(p)
        if math.isnan(v) or v <= 0 or v > self.first_order_bound + _TOL:
            raise ModelContractError(
                f"first-order term {v} outside (0, {self.first_order_bound}]"
            )
        return math.log(v)

    def log_density(self, seq: PointSequence) -> float:
        pts = seq.points
        total = 0.0
        for p in pts:
            if not self.window.contains(p.x, p.y):
                return NEG_INF
            total += self._log_first_order(p)
        if self.quad_params is not None:
            r0, mark_scaled = self.quad_params
            n = len(pts)
            xs = np.array([p.x for p in pts])
            ys = np.array([p.y for p in pts])
            ms = np.array([float(p.mark) if p.mark is not None else 0.0 for p in pts])
            pair_sum = kernels.quadratic_total_logsum(xs, ys, ms, n, r0, mark_scaled)
            return total + pair_sum if pair_sum != NEG_INF else NEG_INF
        for i in range(len(pts)):
            for j in range(i):
                term = _log_unit_interval(self.pair(pts[i], pts[j]), "pair interaction")
                if term == NEG_INF:
                    return NEG_INF
                total += term
        return total

    def log_insert_ratio(self, seq: PointSequence, i: int, u: MarkedPoint) -> float:
        n = len(seq)
        i = _position(i, 1, n + 1, "insert")
        if not self.window.contains(u.x, u.y):
            return NEG_INF
        total = self._log_first_order(u)
        pts = seq.points
        if self.quad_params is not None:
            r0, mark_scaled = self.quad_params
            xs = np.array([p.x for p in pts])
            ys = np.array([p.y for p in pts])
            ms = np.array([float(p.mark) if p.mark is not None else 0.0 for p in pts])
            mu = float(u.mark) if u.mark is not None else 0.0
            pair_sum = kernels.quadratic_insert_logsum(
                xs, ys, ms, n, u.x, u.y, mu, r0, mark_scaled
            )
            return total + pair_sum if pair_sum != NEG_INF else NEG_INF
        for j, p in enumerate(pts):
            # the inserted point is the later member against entries before
            # the slot, the earlier member against the rest
            v = self.pair(u, p) if j < i - 1 else self.pair(p, u)
            term = _log_unit_interval(v, "pair interaction")
            if term == NEG_INF:
                return NEG_INF
            total += term
        return total

    def log_insert_ratio_arrays(self, xs, ys, ms, n, slot, x, y, m) -> float:
        if self.quad_params is None or self.first_order_const is None:
            raise ArgumentError("array fast path needs the quadratic form")
        if not self.window.contains(x, y):
            return NEG_INF
        r0, mark_scaled = self.quad_params
        pair_sum = kernels.quadratic_insert_logsum(xs, ys, ms, n, x, y, m, r0, mark_scaled)
        if pair_sum == NEG_INF:
            return NEG_INF
        return math.log(self.first_order_const) + pair_sum

    def log_delete_ratio_arrays(self, xs, ys, ms, n, slot) -> float:
        if self.quad_params is None or self.first_order_const is None:
            raise ArgumentError("array fast path needs the quadratic form")
        r0, mark_scaled = self.quad_params
        pair_sum = kernels.quadratic_delete_logsum(xs, ys, ms, n, slot, r0, mark_scaled)
        # removing a point from a positive-density state never divides by zero
        return -(math.log(self.first_order_const) + pair_sum)


def pairwise_log_density(model: PairwiseModel, seq: PointSequence) -> float:
    return model.log_density(seq)


def pairwise_quadratic_model(
    window: Window,
    range_const: float | None = None,
    range_mark_scale: float | None = None,
    first_order: float = 1.0,
    marks: MarkDistribution = NO_MARKS,
) -> PairwiseModel:
    """Quadratic pairwise model with range R (constant) or R = scale * (m_i + m_j)."""
    if (range_const is None) == (range_mark_scale is None):
        raise ArgumentError("give exactly one of range_const or range_mark_scale")
    if first_order <= 0:
        raise ArgumentError("first-order value must be positive")
    if range_const is not None:
        if range_const <= 0:
            raise ArgumentError("range must be positive")
        quad = (range_const, False)

        def range_fn(r, s):
            return range_const

    else:
        if range_mark_scale <= 0:
            raise ArgumentError("range scale must be positive")
        quad = (range_mark_scale, True)

        def range_fn(r, s):
            return range_mark_scale * (float(r) + float(s))

    def pair(u, v):
        d = math.hypot(u.x - v.x, u.y - v.y)
        return quadratic_interaction(d, range_fn(u.mark, v.mark))

    return PairwiseModel(
        window=window,
        marks=marks,
        first_order=lambda p: first_order,
        pair=pair,
        range_fn=range_fn,
        first_order_bound=first_order,
        quad_params=quad,
        first_order_const=first_order,
    )
