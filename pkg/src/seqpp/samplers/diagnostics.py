"""Existence and ergodicity diagnostics for the samplers."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..density import NEG_INF, checked_log_density
from ..errors import ArgumentError
from ..geometry import PointSequence
from .engine import ContinuousProposal, Engine
from .events import encode_mark


@dataclass(frozen=True)
class PrestonReport:
    """Sufficient conditions for a unique, convergent jump process.

    With unit death rates the total death rate from length n is n, and the
    total birth rate is bounded by b = beta * area.  Either births vanish
    for large n, or sum_n n!/b^n must diverge while sum_n b^(n-1)/n!
    converges; both hold for every finite b > 0.
    """

    birth_bound: float
    births_vanish: bool
    delta_positive: bool
    series1_partial: float
    series1_diverges: bool
    series1_ratio_exceeds_one_at: int | None
    series2_partial: float
    series2_tail_bound: float
    series2_converges: bool
    conditions_hold: bool


def preston_diagnostic(beta: float, mu_D: float, n_terms: int) -> PrestonReport:
    if n_terms < 2:
        raise ArgumentError("need n_terms >= 2")
    if beta < 0 or mu_D <= 0:
        raise ArgumentError("need beta >= 0 and mu_D > 0")
    b = beta * mu_D
    if b == 0.0:
        return PrestonReport(
            birth_bound=0.0,
            births_vanish=True,
            delta_positive=True,
            series1_partial=math.inf,
            series1_diverges=True,
            series1_ratio_exceeds_one_at=None,
            series2_partial=0.0,
            series2_tail_bound=0.0,
            series2_converges=True,
            conditions_hold=True,
        )

    # series 1: sum_{k>=1} (delta_1..delta_k)/(B_1..B_k) = sum k!/b^k
    s1 = 0.0
    term = 1.0
    ratio_at = None
    for k in range(1, n_terms + 1):
        term *= k / b
        s1 += term
        if ratio_at is None and k / b > 1.0:
            ratio_at = k
        if term == math.inf:
            s1 = math.inf
            break

    # series 2: sum_{k>=2} (B_1..B_{k-1})/(delta_1..delta_k) = sum b^{k-1}/k!
    s2 = 0.0
    term = 1.0  # b^{k-1}/k! at k=1 equals 1/1! = 1
    last = term
    for k in range(2, n_terms + 1):
        term *= b / k
        s2 += term
        last = term
    next_term = last * b / (n_terms + 1)
    tail = next_term / (1.0 - b / (n_terms + 2)) if b < n_terms + 2 else math.inf
    return PrestonReport(
        birth_bound=b,
        births_vanish=False,
        delta_positive=True,
        series1_partial=s1,
        series1_diverges=ratio_at is not None,
        series1_ratio_exceeds_one_at=ratio_at,
        series2_partial=s2,
        series2_tail_bound=tail,
        series2_converges=math.isfinite(tail),
        conditions_hold=ratio_at is not None and math.isfinite(tail),
    )


@dataclass(frozen=True)
class DriftReport:
    """Monte Carlo estimate of E[A^(n' - n)] for one chain step.

    Values below 1 (outside the small set of short sequences) witness the
    geometric drift of V(y) = A^n.  ``bound`` is the analytic ceiling
    (A-1) eps / 2 + (1/A - 1)/2 + 1 with eps = beta * area / (n+1), valid
    once deaths are always accepted; None when no beta is declared.
    Drift is only half of a Harris-recurrence argument: the companion
    small-set minorization is not empirically testable at this level and
    is taken on trust.
    """

    estimate: float
    stderr: float
    n_samples: int
    bound: float | None
    epsilon: float | None
    deaths_always_accepted: bool | None


def drift_diagnostic(model, seq: PointSequence, A: float, n_samples: int, rng) -> DriftReport:
    if A <= 1.0:
        raise ArgumentError("need A > 1")
    if n_samples < 1:
        raise ArgumentError("need n_samples >= 1")
    if checked_log_density(model, seq) == NEG_INF:
        raise ArgumentError("drift diagnostic needs a positive-density state")

    engine = Engine(model, seq, ContinuousProposal(model.window, model.marks))
    n = engine.state.n
    log_area = math.log(model.window.area)
    up, down = A, 1.0 / A

    values = np.empty(n_samples)
    for s in range(n_samples):
        if rng.random() < 0.5:
            i = int(rng.integers(1, n + 2))
            x, y, mark, _ = engine.proposal.sample(rng)
            mark_f = encode_mark(mark, engine.mark_labels)
            log_ratio = engine.insert_log_ratio(i - 1, x, y, mark, mark_f)
            alpha = 0.0 if log_ratio == NEG_INF else math.exp(
                min(0.0, log_ratio + log_area - math.log(n + 1))
            )
            values[s] = up if rng.random() < alpha else 1.0
        elif n == 0:
            values[s] = 1.0
        else:
            i = int(rng.integers(1, n + 1))
            log_ratio = engine.delete_log_ratio(i - 1)
            alpha = 0.0 if log_ratio == NEG_INF else math.exp(
                min(0.0, log_ratio + math.log(n) - log_area)
            )
            values[s] = down if rng.random() < alpha else 1.0

    estimate = float(np.mean(values))
    stderr = float(np.std(values, ddof=1) / math.sqrt(n_samples)) if n_samples > 1 else math.inf
    beta = model.local_stability_bound
    if beta is None:
        bound = eps = always = None
    else:
        eps = beta * model.window.area / (n + 1)
        always = n >= beta * model.window.area
        bound = 0.5 * (A - 1.0) * eps + 0.5 * (down - 1.0) + 1.0
    return DriftReport(
        estimate=estimate,
        stderr=stderr,
        n_samples=n_samples,
        bound=bound,
        epsilon=eps,
        deaths_always_accepted=always,
    )


def batch_mean_stderr(values, n_batches: int = 50) -> float:
    """Standard error of the mean of a correlated series via batch means."""
    values = np.asarray(values, dtype=float)
    if len(values) < 2 * n_batches:
        raise ArgumentError("series too short for the requested batch count")
    usable = (len(values) // n_batches) * n_batches
    batches = values[:usable].reshape(n_batches, -1).mean(axis=1)
    return float(np.std(batches, ddof=1) / math.sqrt(n_batches))
