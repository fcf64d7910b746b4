"""Simple sequential inhibition: each arrival keeps distance r from all
earlier ones and prefers locations according to a density pi.

The implemented log density is the count-weighted product

    log f = mu(D) + log n! + log q_n + sum_k [log pi(x_k) - log I(x_<k)]

with I(x) the pi-mass admissible at distance > r from x and I(empty) = 1.
Per-length normalising constants c_n have no closed form; when they are
known (supplied, or computed exactly on a discrete domain) the model can
carry them and every formula includes them consistently.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from .. import kernels
from ..density import NEG_INF
from ..errors import ArgumentError, ModelContractError
from ..geometry import MarkedPoint, PointSequence, Window
from ..marks import NO_MARKS, MarkDistribution
from ..relations import NeighbourRelation, trivial_relation

_CACHE_LIMIT = 65536


@dataclass(frozen=True)
class LocationDensity:
    """Location preference density on the window: uniform or a finite
    mixture of axis-aligned box uniforms (weights sum to 1)."""

    kind: str
    window: Window
    boxes: tuple[tuple[float, float, float, float, float], ...] = ()

    def __post_init__(self):
        if self.kind == "uniform":
            return
        if self.kind != "boxes":
            raise ArgumentError(f"unknown location density kind {self.kind!r}")
        if not self.boxes:
            raise ArgumentError("box mixture needs at least one box")
        total = 0.0
        for x0, y0, x1, y1, w in self.boxes:
            if not (x1 > x0 and y1 > y0 and w > 0):
                raise ArgumentError("each box needs positive extent and weight")
            total += w
        if abs(total - 1.0) > 1e-9:
            raise ArgumentError(f"box weights sum to {total}, not 1")

    def value(self, x: float, y: float) -> float:
        if not self.window.contains(x, y):
            return 0.0
        if self.kind == "uniform":
            return 1.0 / self.window.area
        v = 0.0
        for x0, y0, x1, y1, w in self.boxes:
            if x0 <= x <= x1 and y0 <= y <= y1:
                v += w / ((x1 - x0) * (y1 - y0))
        return v


def uniform_location_density(window: Window) -> LocationDensity:
    return LocationDensity("uniform", window)


class SSIIntensity(NamedTuple):
    """Closed-form append intensity; ``c_ratio_known`` is False when the
    per-length normalising-constant ratio was unavailable and taken as 1."""

    value: float
    c_ratio_known: bool


@dataclass(frozen=True)
class SSIModel:
    window: Window
    pi: LocationDensity
    r: float
    q: tuple[float, ...]
    quadrature_step: float | None = None
    cells: tuple[tuple[float, float], ...] | None = None
    cell_measure: float | None = None
    norm_constants: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.r <= 0:
            raise ArgumentError("inhibition distance r must be positive")
        if len(self.q) < 1 or any(w < 0 for w in self.q) or sum(self.q) == 0:
            raise ArgumentError("q needs non-negative weights with positive total")
        if abs(sum(self.q) - 1.0) > 1e-9:
            raise ArgumentError(f"q sums to {sum(self.q)}, not 1")
        if (self.cells is None) != (self.cell_measure is None):
            raise ArgumentError("cells and cell_measure go together")
        if self.norm_constants is not None:
            if len(self.norm_constants) != len(self.q):
                raise ArgumentError("norm_constants must align with q")
            if any(c <= 0 for c in self.norm_constants):
                raise ArgumentError("norm_constants must be positive")
        object.__setattr__(self, "_nodes", None)
        object.__setattr__(self, "_integral_cache", {})

    @property
    def n_max(self) -> int:
        return len(self.q) - 1

    @property
    def marks(self) -> MarkDistribution:
        return NO_MARKS

    @property
    def relation(self) -> NeighbourRelation:
        # permutation-invariant likelihood ratio, but it depends on the whole
        # sequence geometry: Markov only under the trivial relation
        return trivial_relation()

    local_stability_bound = None

    # -- admissible-mass integration ---------------------------------------

    def _integration_nodes(self):
        if self._nodes is None:
            if self.cells is not None:
                gx = np.array([c[0] for c in self.cells])
                gy = np.array([c[1] for c in self.cells])
                gw = np.array(
                    [self.pi.value(c[0], c[1]) * self.cell_measure for c in self.cells]
                )
            else:
                step = self.quadrature_step or self.r / 20.0
                nx = max(1, math.ceil(self.window.width / step))
                ny = max(1, math.ceil(self.window.height / step))
                dx = self.window.width / nx
                dy = self.window.height / ny
                xs = self.window.x0 + (np.arange(nx) + 0.5) * dx
                ys = self.window.y0 + (np.arange(ny) + 0.5) * dy
                gx, gy = [a.ravel() for a in np.meshgrid(xs, ys)]
                gw = np.array([self.pi.value(x, y) for x, y in zip(gx, gy)]) * (dx * dy)
            object.__setattr__(self, "_nodes", (gx, gy, gw))
        return self._nodes

    def admissible_integral(self, points) -> float:
        """pi-mass of locations farther than r from every given point.

        Exactly 1 for the empty set; monotone non-increasing in the set.
        Midpoint quadrature at the configured step, or an exact cell sum
        in discrete mode.
        """
        pts = tuple((p.x, p.y) for p in points)
        if not pts:
            return 1.0
        key = tuple(sorted(pts))
        cache = self._integral_cache
        hit = cache.get(key)
        if hit is not None:
            return hit
        gx, gy, gw = self._integration_nodes()
        xs = np.array([p[0] for p in pts])
        ys = np.array([p[1] for p in pts])
        val = kernels.admissible_mass(gx, gy, gw, len(gx), xs, ys, len(pts), self.r)
        if len(cache) >= _CACHE_LIMIT:
            cache.clear()
        cache[key] = val
        return val

    # -- density ------------------------------------------------------------

    def _check_point(self, p: MarkedPoint):
        if p.mark is not None:
            raise ArgumentError("sequential-inhibition points are unmarked")

    def log_density(self, seq: PointSequence) -> float:
        n = len(seq)
        if n > self.n_max:
            return NEG_INF
        if self.q[n] <= 0.0:
            return NEG_INF
        total = self.window.area + math.lgamma(n + 1) + math.log(self.q[n])
        if self.norm_constants is not None:
            total += math.log(self.norm_constants[n])
        prefix: list[MarkedPoint] = []
        for p in seq:
            self._check_point(p)
            pv = self.pi.value(p.x, p.y)
            if pv <= 0.0:
                return NEG_INF
            for prev in prefix:
                if math.hypot(p.x - prev.x, p.y - prev.y) <= self.r:
                    return NEG_INF
            i_val = self.admissible_integral(prefix)
            if i_val <= 0.0:
                return NEG_INF
            total += math.log(pv) - math.log(i_val)
            prefix.append(p)
        return total

    def c_ratio(self, n: int) -> float:
        """c_{n+1}/c_n when the normalising constants are known, else 1."""
        if self.norm_constants is None:
            return 1.0
        return self.norm_constants[n + 1] / self.norm_constants[n]

    def r_ratio(self, n: int) -> float:
        """Length-ratio r_n = n c_n q_n / (c_{n-1} q_{n-1}); 0 beyond the cap."""
        if n < 1 or n > self.n_max or self.q[n] <= 0.0:
            return 0.0
        if self.q[n - 1] <= 0.0:
            raise ModelContractError(
                "length weights are not hereditary; length ratios undefined"
            )
        return n * self.c_ratio(n - 1) * self.q[n] / self.q[n - 1]


def ssi_log_density(model: SSIModel, seq: PointSequence) -> float:
    """Strict evaluation of the inhibition density; lengths above the
    declared cap are a caller error rather than a zero."""
    if len(seq) > model.n_max:
        raise ArgumentError(
            f"sequence length {len(seq)} exceeds the declared cap {model.n_max}"
        )
    return model.log_density(seq)


def admissible_integral(model: SSIModel, points) -> float:
    return model.admissible_integral(points)


def ssi_conditional_intensity(
    model: SSIModel, seq: PointSequence, u: MarkedPoint
) -> SSIIntensity:
    """Closed-form append intensity
    (c_{n+1} q_{n+1} / (c_n q_n)) * pi(u) 1{d(u, x) > r} / I(x), with 0/0 = 0.

    When the normalising constants are unknown the c-ratio is reported as
    1 via ``c_ratio_known=False`` (the value then matches the implemented,
    c-free density; never a silent guess of the length-normalised one).
    """
    known = model.norm_constants is not None
    n = len(seq)
    model._check_point(u)
    if n + 1 > model.n_max or model.q[n + 1] <= 0.0:
        return SSIIntensity(0.0, known)
    if model.log_density(seq) == NEG_INF:
        return SSIIntensity(0.0, known)
    for p in seq:
        if math.hypot(u.x - p.x, u.y - p.y) <= model.r:
            return SSIIntensity(0.0, known)
    pv = model.pi.value(u.x, u.y)
    if pv <= 0.0:
        return SSIIntensity(0.0, known)
    i_val = model.admissible_integral(seq.points)
    if i_val <= 0.0:
        return SSIIntensity(0.0, known)
    ratio = model.c_ratio(n) * model.q[n + 1] / model.q[n]
    return SSIIntensity(ratio * pv / i_val, known)


def truncated_poisson_weights(rate: float, n_max: int) -> tuple[float, ...]:
    """Poisson(rate) count weights truncated to {0..n_max} and renormalised."""
    if rate <= 0 or n_max < 0:
        raise ArgumentError("need rate > 0 and n_max >= 0")
    raw = [math.exp(-rate + n * math.log(rate) - math.lgamma(n + 1)) for n in range(n_max + 1)]
    total = math.fsum(raw)
    return tuple(w / total for w in raw)


def discretise_ssi(model: SSIModel, cells, cell_measure: float) -> SSIModel:
    """Copy of the model whose integrals are exact sums over the given cells."""
    return replace(model, cells=tuple(cells), cell_measure=cell_measure)
