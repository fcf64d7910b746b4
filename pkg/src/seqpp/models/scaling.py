"""Location-dependent rescaling of a locally stable template model.

A scaling function c = (c1, c2) with both components bounded away from 0
and infinity turns a template process into one that locally "looks like"
the template scaled by c at the inserted point: the append intensity is
the template's, evaluated at back-transformed arguments (locations and
radius marks divided by the inserted point's own coefficients) and split
evenly over the n+1 insertion positions.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from ..density import Model, append_ratio, intensity_model
from ..errors import ArgumentError, ModelContractError
from ..geometry import MarkedPoint, PointSequence, Window
from ..marks import MarkDistribution
from ..relations import NeighbourRelation


@dataclass(frozen=True)
class ScalingTransform:
    template: object
    c1: Callable[[MarkedPoint], float]
    c2: Callable[[MarkedPoint], float]
    c_lo: float
    c_hi: float

    def __post_init__(self):
        if not 0 < self.c_lo <= self.c_hi < float("inf"):
            raise ArgumentError("need 0 < c_lo <= c_hi < inf")
        if getattr(self.template, "local_stability_bound", None) is None:
            raise ArgumentError("scaling needs a locally stable template model")

    def coefficients(self, p: MarkedPoint) -> tuple[float, float]:
        vals = (self.c1(p), self.c2(p))
        for v in vals:
            if not self.c_lo <= v <= self.c_hi:
                raise ModelContractError(
                    f"scaling coefficient {v} leaves the declared bounds "
                    f"[{self.c_lo}, {self.c_hi}]"
                )
        return vals

    def back_transform(self, head: MarkedPoint, p: MarkedPoint) -> MarkedPoint:
        """Undo the head point's scaling on p (locations by c1, radii by c2)."""
        c1v, c2v = self.coefficients(head)
        mark = p.mark
        if isinstance(mark, (int, float)):
            mark = float(mark) / c2v
        elif mark is not None:
            raise ArgumentError("scaling transforms support radius or no marks")
        return MarkedPoint(p.x / c1v, p.y / c1v, mark)


def scaled_conditional_intensity(
    t: ScalingTransform, seq: PointSequence, u: MarkedPoint
) -> float:
    """Append intensity of the scaled process: the template's density ratio
    at the back-transformed state, divided by n+1.  Zero when the
    back-transformed point leaves the template window."""
    bu = t.back_transform(u, u)
    if not t.template.window.contains(bu.x, bu.y):
        return 0.0
    bseq = PointSequence(t.back_transform(u, p) for p in seq)
    return append_ratio(t.template, bseq, bu) / (len(seq) + 1)


def scaled_relation(t: ScalingTransform) -> NeighbourRelation:
    """u ~ v in the scaled process iff the template relates the pair after
    undoing u's scaling on both."""
    base = t.template.relation

    def pred(u, v):
        return base(t.back_transform(u, u), t.back_transform(u, v))

    return NeighbourRelation(pred, symmetric=False, name=f"scaled({base.name})")


def scaled_model(
    t: ScalingTransform, window: Window, marks: MarkDistribution
) -> Model:
    """The scaled process as a model, defined through its append intensity."""
    return intensity_model(
        window=window,
        marks=marks,
        relation=scaled_relation(t),
        append_intensity=lambda seq, u: scaled_conditional_intensity(t, seq, u),
        declared_beta=t.template.local_stability_bound,
    )
