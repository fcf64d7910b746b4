"""Continuous-time spatial birth-death jump process via thinning.

The dominating process has constant per-slot birth rate beta/(n+1) (total
beta * area once integrated over the window and marks) and unit death
rate per point, so waiting times are exponential with rate
beta * area + n and no total-rate integral is ever computed.  A proposed
birth is retained with probability ratio/beta, which is at most 1 for a
locally stable density; rejected (idle) births stay in the trace.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..density import NEG_INF, checked_log_density, seq_conditional_intensity
from ..errors import ArgumentError, ModelContractError
from ..geometry import EMPTY, MarkedPoint, PointSequence
from .engine import ContinuousProposal, DiscreteProposal, Engine
from .events import EVENT_BIRTH, EVENT_DEATH, EventLog, RunTrace, encode_mark

_NAN = float("nan")


@dataclass(frozen=True)
class BDConfig:
    t_max: float
    seed: int
    beta: float | None = None
    n_cap: int | None = None
    epoch_dt: float = 0.25
    initial: PointSequence = EMPTY
    # RNG stream selector for independent chains sharing one root seed
    spawn_key: tuple[int, ...] = ()

    def __post_init__(self):
        if self.t_max <= 0:
            raise ArgumentError("t_max must be positive")
        if self.epoch_dt <= 0:
            raise ArgumentError("epoch_dt must be positive")
        if self.beta is not None and self.beta <= 0:
            raise ArgumentError("beta must be positive")


def bd_birth_rate(model, seq: PointSequence, i: int, u: MarkedPoint) -> float:
    """Birth rate density for inserting u at position i under unit death
    rates: f(s_i(y,u)) / ((n+1) f(y)), with 0/0 = 0.

    Identical to the insertion intensity by construction; exposed on its
    own so the jump process's balance equations can be tested against the
    reference-measure weights.
    """
    return seq_conditional_intensity(model, seq, i, u)


def bd_simulate(model, cfg: BDConfig, space=None) -> RunTrace:
    """Event-driven thinning simulation until t_max (or the safety cap).

    States are sampled at the deterministic epochs t_max/2 + k * epoch_dt
    (first half discarded as burn-in).  Reaching the cap is recorded in
    the trace metadata, never silent.
    """
    beta = cfg.beta if cfg.beta is not None else model.local_stability_bound
    if beta is None:
        raise ArgumentError("birth-death simulation needs a local stability bound")
    if checked_log_density(model, cfg.initial) == NEG_INF:
        raise ModelContractError("the process must start from a positive-density state")
    if space is not None:
        # enumerable run: verify the bound exhaustively instead of trusting it
        from ..oracle import stability_check

        tight = stability_check(model, space).tight_beta
        if tight is not None and beta < tight * (1.0 - 1e-12):
            raise ModelContractError(
                f"beta={beta} is below the exhaustive stability bound {tight}"
            )

    area = model.window.area
    b_total = beta * area
    log_beta = math.log(beta)
    n_cap = cfg.n_cap if cfg.n_cap is not None else int(10 * b_total + 100)

    rng = np.random.default_rng(np.random.SeedSequence(cfg.seed, spawn_key=cfg.spawn_key))
    proposal = (
        DiscreteProposal(space) if space is not None else ContinuousProposal(model.window, model.marks)
    )
    engine = Engine(model, cfg.initial, proposal, space=space)

    log = EventLog()
    counts: dict | None = {} if space is not None else None
    sample_times = []
    sample_lengths = []
    next_epoch = cfg.t_max / 2.0
    truncated = False

    t = 0.0
    while True:
        n = engine.state.n
        rate = b_total + n
        t_next = t + rng.exponential(1.0 / rate)
        while next_epoch <= cfg.t_max and next_epoch < t_next:
            sample_times.append(next_epoch)
            sample_lengths.append(n)
            if counts is not None:
                key = engine.state.key_tuple()
                counts[key] = counts.get(key, 0) + 1
            next_epoch += cfg.epoch_dt
        if t_next > cfg.t_max:
            break
        t = t_next
        if rng.random() < b_total / rate:
            i = int(rng.integers(1, n + 2))
            x, y, mark, key = proposal.sample(rng)
            mark_f = encode_mark(mark, engine.mark_labels)
            log_ratio = engine.insert_log_ratio(i - 1, x, y, mark, mark_f)
            if log_ratio == NEG_INF:
                retain = 0.0
            else:
                retain = math.exp(log_ratio - log_beta)
                if retain > 1.0 + 1e-9:
                    raise ModelContractError(
                        f"retention probability {retain} exceeds 1: beta={beta} "
                        f"is not a valid local stability bound"
                    )
            accepted = rng.random() < retain
            if accepted:
                engine.state.insert(i - 1, x, y, mark_f, key)
            log.append(t, EVENT_BIRTH, i, x, y, mark_f, accepted, engine.state.n)
            if engine.state.n > n_cap:
                truncated = True
                break
        else:
            i = int(rng.integers(1, n + 1))
            engine.state.remove(i - 1)
            log.append(t, EVENT_DEATH, i, _NAN, _NAN, _NAN, True, engine.state.n)

    return RunTrace(
        kind="bd",
        seed=cfg.seed,
        initial=cfg.initial,
        final=engine.sequence(),
        events=log.as_arrays(),
        sample_times=np.asarray(sample_times),
        sample_lengths=np.asarray(sample_lengths, dtype=int),
        state_counts=counts,
        mark_labels=engine.mark_labels,
        meta={
            "sampler": "bd",
            "t_max": cfg.t_max,
            "beta": beta,
            "n_cap": n_cap,
            "epoch_dt": cfg.epoch_dt,
            "truncated": truncated,
            "rng": "numpy PCG64 (default_rng)",
            "stream": f"SeedSequence({cfg.seed}, spawn_key={cfg.spawn_key})",
        },
    )
