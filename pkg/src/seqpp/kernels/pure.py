"""Pure-Python reference kernels.

These mirror the compiled loops in ``seqpp._native`` operation for
operation so both backends produce bit-identical floating point results.
Inputs are indexable float buffers (numpy arrays in practice); ``n`` is
the number of live entries.
"""
from __future__ import annotations

import math

NEG_INF = float("-inf")


def softcore_insert_count(xs, ys, ms, n, slot, x, y, m, invader):
    """Covering indicators gained by inserting (x, y, m) at 0-based slot.

    Entries before the slot act as settlers against the new point; the new
    point acts as settler against later entries.  ``invader`` flips which
    side's mark is the territory radius.
    """
    c = 0
    for j in range(n):
        dx = x - xs[j]
        dy = y - ys[j]
        d2 = dx * dx + dy * dy
        if j < slot:
            t = m if invader else ms[j]
        else:
            t = ms[j] if invader else m
        if d2 <= t * t:
            c += 1
    return c


def softcore_total_count(xs, ys, ms, n, invader):
    """Total covering indicators over all ordered pairs (earlier, later)."""
    c = 0
    for i in range(n):
        xi = xs[i]
        yi = ys[i]
        for j in range(i):
            dx = xi - xs[j]
            dy = yi - ys[j]
            d2 = dx * dx + dy * dy
            t = ms[i] if invader else ms[j]
            if d2 <= t * t:
                c += 1
    return c


def softcore_delete_count(xs, ys, ms, n, slot, invader):
    """Covering indicators lost by removing the entry at 0-based slot."""
    x = xs[slot]
    y = ys[slot]
    m = ms[slot]
    c = 0
    for j in range(n):
        if j == slot:
            continue
        dx = x - xs[j]
        dy = y - ys[j]
        d2 = dx * dx + dy * dy
        if j < slot:
            t = m if invader else ms[j]
        else:
            t = ms[j] if invader else m
        if d2 <= t * t:
            c += 1
    return c


def quadratic_insert_logsum(xs, ys, ms, n, x, y, m, r0, mark_scaled):
    """Sum of log quadratic pair terms gained by inserting (x, y, m).

    The pair term is 1 - (1 - d^2/R^2)^2 inside range R and 1 beyond,
    with R = r0 or r0 * (m_i + m_j) when mark_scaled.  Symmetric in the
    pair, hence independent of the insertion slot.  Returns -inf for a
    coincident pair.
    """
    s = 0.0
    for j in range(n):
        dx = x - xs[j]
        dy = y - ys[j]
        d2 = dx * dx + dy * dy
        r = r0 * (m + ms[j]) if mark_scaled else r0
        if d2 >= r * r:
            continue
        w = 1.0 - d2 / (r * r)
        v = 1.0 - w * w
        if v <= 0.0:
            return NEG_INF
        s += math.log(v)
    return s


def quadratic_total_logsum(xs, ys, ms, n, r0, mark_scaled):
    """Sum of log quadratic pair terms over all ordered pairs."""
    s = 0.0
    for i in range(n):
        xi = xs[i]
        yi = ys[i]
        mi = ms[i]
        for j in range(i):
            dx = xi - xs[j]
            dy = yi - ys[j]
            d2 = dx * dx + dy * dy
            r = r0 * (mi + ms[j]) if mark_scaled else r0
            if d2 >= r * r:
                continue
            w = 1.0 - d2 / (r * r)
            v = 1.0 - w * w
            if v <= 0.0:
                return NEG_INF
            s += math.log(v)
    return s


def quadratic_delete_logsum(xs, ys, ms, n, slot, r0, mark_scaled):
    """Sum of log quadratic pair terms lost by removing the entry at slot."""
    x = xs[slot]
    y = ys[slot]
    m = ms[slot]
    s = 0.0
    for j in range(n):
        if j == slot:
            continue
        dx = x - xs[j]
        dy = y - ys[j]
        d2 = dx * dx + dy * dy
        r = r0 * (m + ms[j]) if mark_scaled else r0
        if d2 >= r * r:
            continue
        w = 1.0 - d2 / (r * r)
        v = 1.0 - w * w
        if v <= 0.0:
            return NEG_INF
        s += math.log(v)
    return s


def min_dist_sq(xs, ys, n, x, y):
    """Squared distance from (x, y) to the nearest of n points (inf if none)."""
    best = math.inf
    for j in range(n):
        dx = x - xs[j]
        dy = y - ys[j]
        d2 = dx * dx + dy * dy
        if d2 < best:
            best = d2
    return best


def admissible_mass(gx, gy, gw, ncells, xs, ys, n, r):
    """Total weight of grid nodes farther than r from every one of n points."""
    r2 = r * r
    total = 0.0
    for c in range(ncells):
        cx = gx[c]
        cy = gy[c]
        ok = True
        for j in range(n):
            dx = cx - xs[j]
            dy = cy - ys[j]
            if dx * dx + dy * dy <= r2:
                ok = False
                break
        if ok:
            total += gw[c]
    return total
