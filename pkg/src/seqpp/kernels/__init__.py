"""Numeric kernels: compiled fast path with a pure-Python fallback.

The compiled module ``seqpp._native`` is preferred when importable.  Set
the environment variable ``SEQPP_PURE=1`` before import to force the
fallback (used by the kernel benchmark and the backend-parity tests).
``BACKEND`` records which implementation is active.
"""
import os

from . import pure as _pure

if os.environ.get("SEQPP_PURE"):
    _impl = _pure
    BACKEND = "pure"
else:
    try:
        from seqpp import _native as _impl  # type: ignore

        BACKEND = "native"
    except ImportError:
        _impl = _pure
        BACKEND = "pure"

softcore_insert_count = _impl.softcore_insert_count
softcore_delete_count = _impl.softcore_delete_count
softcore_total_count = _impl.softcore_total_count
quadratic_insert_logsum = _impl.quadratic_insert_logsum
quadratic_delete_logsum = _impl.quadratic_delete_logsum
quadratic_total_logsum = _impl.quadratic_total_logsum
min_dist_sq = _impl.min_dist_sq
admissible_mass = _impl.admissible_mass

__all__ = [
    "BACKEND",
    "softcore_insert_count",
    "softcore_delete_count",
    "softcore_total_count",
    "quadratic_insert_logsum",
    "quadratic_delete_logsum",
    "quadratic_total_logsum",
    "min_dist_sq",
    "admissible_mass",
]
