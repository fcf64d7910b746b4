"""Model contract and the model-agnostic sequence/intensity algebra.

All densities are unnormalised and live in log space; a density value of
zero is represented by -inf.  The insertion intensity for putting a point
at position i of an n-sequence is f(s_i) / ((n+1) f), with the convention
0/0 = 0 and value 0 whenever the current sequence has zero density.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import ArgumentError, NumericEvaluationError
from .geometry import MarkedPoint, PointSequence, Window, _position, insert_at
from .marks import MarkDistribution
from .relations import NeighbourRelation

NEG_INF = float("-inf")


@dataclass(frozen=True)
class Model:
    """A sequential spatial model given directly by its log density.

    ``log_density`` maps a PointSequence to an unnormalised log density
    (-inf for zero).  The empty sequence must have finite log density.
    ``local_stability_bound`` is a declared beta with
    f(s_i(y, u)) <= beta * f(y) for every insertion; None when unknown.
    """

    window: Window
    marks: MarkDistribution
    relation: NeighbourRelation
    log_density: Callable[[PointSequence], float]
    local_stability_bound: float | None = None


def checked_log_density(model, seq: PointSequence) -> float:
    """Evaluate a model's log density, rejecting NaN and +inf."""
    v = model.log_density(seq)
    if math.isnan(v) or v == math.inf:
        raise NumericEvaluationError(
            f"log density evaluated to {v} on a sequence of length {len(seq)}",
            sequence=seq,
        )
    return v


def seq_conditional_intensity(
    model, seq: PointSequence, i: int, u: MarkedPoint
) -> float:
    """Intensity of inserting u at position i: f(s_i(y,u)) / ((n+1) f(y)).

    Returns 0 when f(y) = 0 (the value there is a free choice; we fix 0)
    and when f(s_i) = 0.
    """
    n = len(seq)
    i = _position(i, 1, n + 1, "insert")
    log_f = checked_log_density(model, seq)
    if log_f == NEG_INF:
        return 0.0
    log_new = checked_log_density(model, insert_at(seq, i, u))
    if log_new == NEG_INF:
        return 0.0
    value = math.exp(log_new - log_f - math.log(n + 1))
    if value == math.inf:
        raise NumericEvaluationError(
            f"insertion intensity overflowed (log ratio {log_new - log_f})",
            sequence=seq,
        )
    return value


def total_insertion_intensity(model, seq: PointSequence, u: MarkedPoint) -> float:
    """Overall intensity of u entering anywhere: sum over the n+1 positions."""
    return math.fsum(
        seq_conditional_intensity(model, seq, i, u) for i in range(1, len(seq) + 2)
    )


def append_ratio(model, seq: PointSequence, u: MarkedPoint) -> float:
    """Density ratio f((y, u)) / f(y), i.e. (n+1) times the append intensity."""
    return (len(seq) + 1) * seq_conditional_intensity(model, seq, len(seq) + 1, u)


def log_density_from_intensities(
    intensities: Sequence[float], declared_beta: float | None = None
) -> float:
    """Log density reconstructed from per-position insertion intensities.

    Returns log n! + sum_i log lambda_i (-inf when any entry is zero).
    Integrability is the caller's duty; when ``declared_beta`` is given,
    a warning is emitted if some lambda_i exceeds beta/i, the sufficient
    condition for integrability.
    """
    total = math.lgamma(len(intensities) + 1)
    for idx, lam in enumerate(intensities, start=1):
        if math.isnan(lam) or lam < 0 or lam == math.inf:
            raise ArgumentError(f"intensity #{idx} is {lam}; need finite values >= 0")
        if declared_beta is not None and lam > declared_beta / idx + 1e-12:
            warnings.warn(
                f"intensity #{idx} = {lam} exceeds declared beta/i = "
                f"{declared_beta / idx}; integrability condition violated",
                stacklevel=2,
            )
        if lam == 0.0:
            return NEG_INF
        total += math.log(lam)
    return total


def intensity_model(
    window: Window,
    marks: MarkDistribution,
    relation: NeighbourRelation,
    append_intensity: Callable[[PointSequence, MarkedPoint], float],
    local_stability_bound: float | None = None,
    declared_beta: float | None = None,
) -> Model:
    """Model defined by its append intensity lambda_{n+1}(u | y).

    The density is the factorial-weighted product of the intensities along
    the sequence's own build-up order.
    """

    def log_density(seq: PointSequence) -> float:
        lams = []
        prefix = PointSequence()
        for p in seq:
            lams.append(append_intensity(prefix, p))
            prefix = insert_at(prefix, len(prefix) + 1, p)
        return log_density_from_intensities(lams, declared_beta=declared_beta)

    return Model(
        window=window,
        marks=marks,
        relation=relation,
        log_density=log_density,
        local_stability_bound=local_stability_bound,
    )


@dataclass(frozen=True)
class TruncatedModel:
    """Length-truncated view of a model: density zero beyond n_max.

    Sampling against an enumerable space targets exactly this density, so
    chains and exact transition matrices stay on the finite state space.
    """

    base: object
    n_max: int

    @property
    def window(self):
        return self.base.window

    @property
    def marks(self):
        return self.base.marks

    @property
    def relation(self):
        return self.base.relation

    @property
    def local_stability_bound(self):
        return self.base.local_stability_bound

    def log_density(self, seq: PointSequence) -> float:
        if len(seq) > self.n_max:
            return NEG_INF
        return self.base.log_density(seq)


