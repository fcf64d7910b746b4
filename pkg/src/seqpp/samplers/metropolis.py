"""Discrete-time birth/death Metropolis-Hastings chain.

Each step flips a fair coin between proposing a birth (uniform position
among the n+1 slots, new point uniform over window and marks, accepted
with min{1, ratio * area / (n+1)}) and a death (uniform position,
accepted with min{1, ratio * n / area}); a death proposed from the empty
sequence does nothing.  Started from a positive-density state the chain
never leaves the positive-density set.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ..density import NEG_INF, checked_log_density
from ..errors import ArgumentError, ModelContractError
from ..geometry import EMPTY, PointSequence
from .engine import ContinuousProposal, DiscreteProposal, Engine
from .events import (
    EVENT_BIRTH,
    EVENT_DEATH,
    EVENT_IDLE,
    EventLog,
    RunTrace,
    encode_mark,
)

_NAN = float("nan")


@dataclass(frozen=True)
class MHConfig:
    steps: int
    seed: int
    initial: PointSequence = EMPTY
    record_every: int = 1
    # RNG stream selector for independent chains sharing one root seed
    spawn_key: tuple[int, ...] = ()

    def __post_init__(self):
        if self.steps < 0:
            raise ArgumentError("steps must be non-negative")
        if self.record_every < 1:
            raise ArgumentError("record_every must be >= 1")


class Event(NamedTuple):
    kind: int
    position: int
    x: float
    y: float
    mark: float
    accepted: bool


def _engine_step(engine: Engine, rng, log_area: float) -> Event:
    st = engine.state
    n = st.n
    if rng.random() < 0.5:
        i = int(rng.integers(1, n + 2))
        x, y, mark, key = engine.proposal.sample(rng)
        mark_f = encode_mark(mark, engine.mark_labels)
        log_ratio = engine.insert_log_ratio(i - 1, x, y, mark, mark_f)
        if log_ratio == NEG_INF:
            alpha = 0.0
        else:
            alpha = math.exp(min(0.0, log_ratio + log_area - math.log(n + 1)))
        accepted = rng.random() < alpha
        if accepted:
            st.insert(i - 1, x, y, mark_f, key)
        return Event(EVENT_BIRTH, i, x, y, mark_f, accepted)
    if n == 0:
        return Event(EVENT_IDLE, 0, _NAN, _NAN, _NAN, False)
    i = int(rng.integers(1, n + 1))
    log_ratio = engine.delete_log_ratio(i - 1)
    if log_ratio == NEG_INF:
        alpha = 0.0
    else:
        alpha = math.exp(min(0.0, log_ratio + math.log(n) - log_area))
    accepted = rng.random() < alpha
    if accepted:
        st.remove(i - 1)
    return Event(EVENT_DEATH, i, _NAN, _NAN, _NAN, accepted)


def mh_step(model, seq: PointSequence, rng) -> tuple[PointSequence, Event]:
    """One Metropolis-Hastings transition from a positive-density state."""
    if checked_log_density(model, seq) == NEG_INF:
        raise ModelContractError("the chain must start from a positive-density state")
    engine = Engine(model, seq, ContinuousProposal(model.window, model.marks))
    event = _engine_step(engine, rng, math.log(model.window.area))
    return engine.sequence(), event


def mh_run(model, cfg: MHConfig, space=None) -> RunTrace:
    """Run the chain for cfg.steps transitions; deterministic given the seed.

    With ``space`` given, proposals are drawn from the space's cells and
    mark levels and per-state visit counts are accumulated (the model
    should then be the matching length-truncated one).
    """
    if checked_log_density(model, cfg.initial) == NEG_INF:
        raise ModelContractError("the chain must start from a positive-density state")
    rng = np.random.default_rng(np.random.SeedSequence(cfg.seed, spawn_key=cfg.spawn_key))
    proposal = (
        DiscreteProposal(space) if space is not None else ContinuousProposal(model.window, model.marks)
    )
    engine = Engine(model, cfg.initial, proposal, space=space)
    log_area = math.log(model.window.area)

    log = EventLog()
    counts: dict | None = {} if space is not None else None
    sample_steps = []
    sample_lengths = []
    for step in range(1, cfg.steps + 1):
        ev = _engine_step(engine, rng, log_area)
        log.append(step, ev.kind, ev.position, ev.x, ev.y, ev.mark, ev.accepted, engine.state.n)
        if counts is not None:
            key = engine.state.key_tuple()
            counts[key] = counts.get(key, 0) + 1
        if step % cfg.record_every == 0:
            sample_steps.append(step)
            sample_lengths.append(engine.state.n)

    return RunTrace(
        kind="mh",
        seed=cfg.seed,
        initial=cfg.initial,
        final=engine.sequence(),
        events=log.as_arrays(),
        sample_times=np.asarray(sample_steps, dtype=float),
        sample_lengths=np.asarray(sample_lengths, dtype=int),
        state_counts=counts,
        mark_labels=engine.mark_labels,
        meta={
            "sampler": "mh",
            "steps": cfg.steps,
            "record_every": cfg.record_every,
            "rng": "numpy PCG64 (default_rng)",
            "stream": f"SeedSequence({cfg.seed}, spawn_key={cfg.spawn_key})",
        },
    )
