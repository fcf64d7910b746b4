"""Shared chain machinery: mutable array state, proposals, ratio dispatch.

The random draw order is part of the reproducibility contract and is
fixed as: move coin, position, location x, location y, mark, acceptance.
The acceptance uniform is always drawn for a proposed move, even when the
acceptance probability is 0 or 1.
"""
from __future__ import annotations

import math

import numpy as np

from ..density import NEG_INF, TruncatedModel, checked_log_density
from ..errors import ModelContractError
from ..geometry import MarkedPoint, PointSequence, insert_at
from .events import encode_mark

_NAN = float("nan")


class ChainState:
    """Growable parallel arrays holding the live sequence."""

    __slots__ = ("xs", "ys", "ms", "n", "keys")

    def __init__(self, capacity: int = 64):
        self.xs = np.zeros(capacity)
        self.ys = np.zeros(capacity)
        self.ms = np.zeros(capacity)
        self.n = 0
        self.keys: list = []

    def _grow(self):
        cap = 2 * len(self.xs)
        for name in ("xs", "ys", "ms"):
            old = getattr(self, name)
            new = np.zeros(cap)
            new[: self.n] = old[: self.n]
            setattr(self, name, new)

    def insert(self, slot: int, x: float, y: float, mark_f: float, key=None):
        if self.n == len(self.xs):
            self._grow()
        n = self.n
        for arr, val in ((self.xs, x), (self.ys, y), (self.ms, mark_f)):
            arr[slot + 1 : n + 1] = arr[slot:n].copy()
            arr[slot] = val
        self.keys.insert(slot, key)
        self.n = n + 1

    def remove(self, slot: int):
        n = self.n
        for arr in (self.xs, self.ys, self.ms):
            arr[slot : n - 1] = arr[slot + 1 : n].copy()
        self.keys.pop(slot)
        self.n = n - 1

    def key_tuple(self) -> tuple:
        return tuple(self.keys)


class ContinuousProposal:
    """Uniform location over the window, mark from the mark distribution."""

    def __init__(self, window, marks):
        self.window = window
        self.marks = marks

    def sample(self, rng):
        x = self.window.x0 + rng.random() * self.window.width
        y = self.window.y0 + rng.random() * self.window.height
        mark = self.marks.sample(rng)
        return x, y, mark, None


class DiscreteProposal:
    """Uniform cell plus weighted mark level from an enumerable space."""

    def __init__(self, space):
        self.space = space
        self._k = len(space.cells)
        self._mark_weights = [w for _, w in space.mark_levels]
        self._single_mark = len(space.mark_levels) == 1

    def sample(self, rng):
        ci = int(rng.integers(0, self._k))
        if self._single_mark:
            mi = 0
        else:
            u = rng.random()
            acc = 0.0
            mi = len(self._mark_weights) - 1
            for idx, w in enumerate(self._mark_weights):
                acc += w
                if u < acc:
                    mi = idx
                    break
        p = self.space.point(ci, mi)
        return p.x, p.y, p.mark, (ci, mi)


class Engine:
    """Ratio evaluation and state bookkeeping for one chain."""

    def __init__(self, model, initial: PointSequence, proposal, space=None):
        self.model = model
        self.proposal = proposal
        self.space = space
        marks = model.marks
        self.mark_labels = marks.labels if marks.kind == "label" else None

        target = model
        self.n_limit = None
        if isinstance(target, TruncatedModel):
            self.n_limit = target.n_max
            target = target.base
        self._fast_ins = getattr(target, "log_insert_ratio_arrays", None)
        self._fast_del = getattr(target, "log_delete_ratio_arrays", None)

        self.state = ChainState(capacity=max(64, 2 * len(initial) + 8))
        for p in initial:
            key = space.key_of_point(p) if space is not None else None
            self.state.insert(
                self.state.n, p.x, p.y, encode_mark(p.mark, self.mark_labels), key
            )

    def sequence(self) -> PointSequence:
        st = self.state
        pts = []
        for j in range(st.n):
            mf = st.ms[j]
            if math.isnan(mf):
                mark = None
            elif self.mark_labels is not None:
                mark = self.mark_labels[int(mf)]
            else:
                mark = float(mf)
            pts.append(MarkedPoint(float(st.xs[j]), float(st.ys[j]), mark))
        return PointSequence(pts)

    def insert_log_ratio(self, slot: int, x: float, y: float, mark, mark_f: float) -> float:
        st = self.state
        if self.n_limit is not None and st.n + 1 > self.n_limit:
            return NEG_INF
        if self._fast_ins is not None:
            return self._fast_ins(st.xs, st.ys, st.ms, st.n, slot, x, y, mark_f)
        seq = self.sequence()
        cur = checked_log_density(self.model, seq)
        new = checked_log_density(self.model, insert_at(seq, slot + 1, MarkedPoint(x, y, mark)))
        if cur == NEG_INF:
            raise ModelContractError("chain state left the positive-density set")
        return new - cur

    def delete_log_ratio(self, slot: int) -> float:
        st = self.state
        if self._fast_del is not None:
            return self._fast_del(st.xs, st.ys, st.ms, st.n, slot)
        seq = self.sequence()
        cur = checked_log_density(self.model, seq)
        if cur == NEG_INF:
            raise ModelContractError("chain state left the positive-density set")
        pts = seq.points
        reduced = PointSequence(pts[:slot] + pts[slot + 1 :])
        return checked_log_density(self.model, reduced) - cur
