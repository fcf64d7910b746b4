"""Run traces: replayable event records plus sampled-state summaries."""
from __future__ import annotations

import math
from array import array
from dataclasses import dataclass, field

import numpy as np

from ..errors import ArgumentError
from ..geometry import MarkedPoint, PointSequence, insert_at, remove_at

EVENT_BIRTH = 0
EVENT_DEATH = 1
EVENT_IDLE = 2

_EVENT_NAMES = {EVENT_BIRTH: "birth", EVENT_DEATH: "death", EVENT_IDLE: "idle"}
_NAN = float("nan")


class EventLog:
    """Columnar append-only record of sampler transitions."""

    __slots__ = ("t", "kind", "pos", "x", "y", "mark", "accepted", "n_after")

    def __init__(self):
        self.t = array("d")
        self.kind = array("b")
        self.pos = array("l")
        self.x = array("d")
        self.y = array("d")
        self.mark = array("d")
        self.accepted = array("b")
        self.n_after = array("l")

    def append(self, t, kind, pos, x, y, mark, accepted, n_after):
        self.t.append(t)
        self.kind.append(kind)
        self.pos.append(pos)
        self.x.append(x)
        self.y.append(y)
        self.mark.append(mark)
        self.accepted.append(accepted)
        self.n_after.append(n_after)

    def __len__(self):
        return len(self.t)

    def as_arrays(self) -> dict[str, np.ndarray]:
        return {
            "t": np.asarray(self.t),
            "kind": np.asarray(self.kind),
            "pos": np.asarray(self.pos),
            "x": np.asarray(self.x),
            "y": np.asarray(self.y),
            "mark": np.asarray(self.mark),
            "accepted": np.asarray(self.accepted),
            "n_after": np.asarray(self.n_after),
        }


def _fmt(v: float) -> str:
    return f"{v:.17g}"


@dataclass
class RunTrace:
    """Reproducible record of one sampler run.

    ``events`` holds every transition attempt, so replaying them from the
    initial state reconstructs the final state exactly.  ``mark_labels``
    is set when marks are labels; event mark columns then carry indices.
    """

    kind: str
    seed: int
    initial: PointSequence
    final: PointSequence
    events: dict[str, np.ndarray]
    sample_times: np.ndarray
    sample_lengths: np.ndarray
    state_counts: dict | None = None
    mark_labels: tuple[str, ...] | None = None
    meta: dict = field(default_factory=dict)

    @property
    def n_events(self) -> int:
        return len(self.events["t"])

    def _decode_mark(self, value: float):
        if math.isnan(value):
            return None
        if self.mark_labels is not None:
            return self.mark_labels[int(value)]
        return value

    def replay(self) -> PointSequence:
        """Re-apply the accepted events to the initial state."""
        seq = self.initial
        ev = self.events
        for j in range(self.n_events):
            if not ev["accepted"][j]:
                continue
            kind = ev["kind"][j]
            if kind == EVENT_BIRTH:
                u = MarkedPoint(ev["x"][j], ev["y"][j], self._decode_mark(ev["mark"][j]))
                seq = insert_at(seq, int(ev["pos"][j]), u)
            elif kind == EVENT_DEATH:
                seq = remove_at(seq, int(ev["pos"][j]))
        return seq

    def acceptance_rate(self, kind: int | None = None) -> float:
        ev = self.events
        sel = np.ones(self.n_events, dtype=bool) if kind is None else ev["kind"] == kind
        total = int(sel.sum())
        if total == 0:
            return float("nan")
        return float(ev["accepted"][sel].sum()) / total

    def mean_count(self) -> float:
        if len(self.sample_lengths) == 0:
            return float("nan")
        return float(np.mean(self.sample_lengths))

    def count_histogram(self) -> dict[int, int]:
        values, counts = np.unique(self.sample_lengths, return_counts=True)
        return {int(v): int(c) for v, c in zip(values, counts)}

    def write_csv(self, path) -> None:
        """Event table: t_or_step, event, position, x, y, mark, accepted, n_after."""
        ev = self.events
        is_bd = self.kind == "bd"
        with open(path, "w", newline="") as fh:
            fh.write("t_or_step,event,position,x,y,mark,accepted,n_after\n")
            for j in range(self.n_events):
                kind = int(ev["kind"][j])
                t = _fmt(ev["t"][j]) if is_bd else str(int(ev["t"][j]))
                if kind == EVENT_BIRTH:
                    mark = self._decode_mark(ev["mark"][j])
                    mark_s = "" if mark is None else (mark if isinstance(mark, str) else _fmt(mark))
                    point = f"{_fmt(ev['x'][j])},{_fmt(ev['y'][j])},{mark_s}"
                    pos = str(int(ev["pos"][j]))
                elif kind == EVENT_DEATH:
                    point = ",,"
                    pos = str(int(ev["pos"][j]))
                else:
                    point = ",,"
                    pos = ""
                fh.write(
                    f"{t},{_EVENT_NAMES[kind]},{pos},{point},"
                    f"{int(ev['accepted'][j])},{int(ev['n_after'][j])}\n"
                )


def write_state_csv(seq: PointSequence, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("x,y,mark\n")
        for p in seq:
            mark_s = "" if p.mark is None else (p.mark if isinstance(p.mark, str) else _fmt(p.mark))
            fh.write(f"{_fmt(p.x)},{_fmt(p.y)},{mark_s}\n")


def encode_mark(mark, mark_labels: tuple[str, ...] | None) -> float:
    """Float encoding used in event columns (label marks become indices)."""
    if mark is None:
        return _NAN
    if isinstance(mark, str):
        if mark_labels is None:
            raise ArgumentError("label mark without a label table")
        return float(mark_labels.index(mark))
    return float(mark)
