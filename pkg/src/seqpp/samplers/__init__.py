"""Birth-death jump process, Metropolis-Hastings chain, and diagnostics."""

from .birth_death import BDConfig, bd_birth_rate, bd_simulate
from .diagnostics import (
    DriftReport,
    PrestonReport,
    batch_mean_stderr,
    drift_diagnostic,
    preston_diagnostic,
)
from .events import (
    EVENT_BIRTH,
    EVENT_DEATH,
    EVENT_IDLE,
    RunTrace,
    write_state_csv,
)
from .metropolis import Event, MHConfig, mh_run, mh_step

__all__ = [
    "BDConfig",
    "bd_birth_rate",
    "bd_simulate",
    "DriftReport",
    "PrestonReport",
    "batch_mean_stderr",
    "drift_diagnostic",
    "preston_diagnostic",
    "EVENT_BIRTH",
    "EVENT_DEATH",
    "EVENT_IDLE",
    "RunTrace",
    "write_state_csv",
    "Event",
    "MHConfig",
    "mh_run",
    "mh_step",
]
