"""Mark distributions: none, a positive-real radius, or a finite label set."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ArgumentError
from .geometry import Mark


@dataclass(frozen=True)
class MarkDistribution:
    """Probability measure for marks.

    kind "none"   -- unmarked points.
    kind "radius" -- positive real marks; family "uniform" with params
                     (lo, hi) is a density on [lo, hi], family "point" is
                     the degenerate measure at params[0] (a measure, not a
                     density, so the normalisation check does not apply).
    kind "label"  -- finite label set with weights (uniform by default).
    """

    kind: str
    family: str | None = None
    params: tuple[float, ...] = ()
    labels: tuple[str, ...] = ()
    weights: tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind == "none":
            return
        if self.kind == "radius":
            if self.family == "uniform":
                if len(self.params) != 2 or not 0 < self.params[0] < self.params[1]:
                    raise ArgumentError("uniform radius family needs 0 < lo < hi")
                self.check_normalised(cells=10_000)
            elif self.family == "point":
                if len(self.params) != 1 or self.params[0] <= 0:
                    raise ArgumentError("point radius family needs one positive value")
            else:
                raise ArgumentError(f"unknown radius family {self.family!r}")
            return
        if self.kind == "label":
            if not self.labels:
                raise ArgumentError("label marks need a non-empty label set")
            if self.weights:
                if len(self.weights) != len(self.labels):
                    raise ArgumentError("label weights must match labels")
                if any(w <= 0 for w in self.weights):
                    raise ArgumentError("label weights must be positive")
                total = sum(self.weights)
                if abs(total - 1.0) > 1e-9:
                    raise ArgumentError("label weights must sum to 1")
            return
        raise ArgumentError(f"unknown mark kind {self.kind!r}")

    def sample(self, rng) -> Mark:
        if self.kind == "none":
            return None
        if self.kind == "radius":
            if self.family == "uniform":
                lo, hi = self.params
                return lo + (hi - lo) * rng.random()
            return self.params[0]
        # label
        if self.weights:
            u = rng.random()
            acc = 0.0
            for lbl, w in zip(self.labels, self.weights):
                acc += w
                if u < acc:
                    return lbl
            return self.labels[-1]
        return self.labels[int(rng.integers(0, len(self.labels)))]

    def pdf(self, m: float) -> float:
        """Density of a radius mark w.r.t. Lebesgue measure on (0, inf)."""
        if self.kind != "radius" or self.family != "uniform":
            raise ArgumentError("pdf is defined for the uniform radius family only")
        lo, hi = self.params
        return 1.0 / (hi - lo) if lo <= m <= hi else 0.0

    def check_normalised(self, tol: float = 1e-6, cells: int = 100_000) -> float:
        """Midpoint-quadrature check that a density family integrates to 1.

        Returns the quadrature value; raises ArgumentError beyond tol.
        """
        if self.kind != "radius" or self.family != "uniform":
            return 1.0
        lo, hi = self.params
        step = (hi - lo) / cells
        total = math.fsum(self.pdf(lo + (c + 0.5) * step) for c in range(cells)) * step
        if abs(total - 1.0) > tol:
            raise ArgumentError(f"mark density integrates to {total}, not 1")
        return total


NO_MARKS = MarkDistribution("none")


def uniform_radius_marks(lo: float, hi: float) -> MarkDistribution:
    return MarkDistribution("radius", family="uniform", params=(lo, hi))


def fixed_radius_marks(value: float) -> MarkDistribution:
    return MarkDistribution("radius", family="point", params=(value,))


def label_marks(labels, weights=None) -> MarkDistribution:
    return MarkDistribution(
        "label", labels=tuple(labels), weights=tuple(weights) if weights else ()
    )
