# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; must stay operation-for-operation identical to
seqpp.kernels.pure so both backends give bit-identical floats."""

from libc.math cimport INFINITY, log


def softcore_insert_count(double[::1] xs, double[::1] ys, double[::1] ms,
                          Py_ssize_t n, Py_ssize_t slot,
                          double x, double y, double m, bint invader):
    cdef Py_ssize_t j
    cdef long c = 0
    cdef double dx, dy, d2, t
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


def softcore_delete_count(double[::1] xs, double[::1] ys, double[::1] ms,
                          Py_ssize_t n, Py_ssize_t slot, bint invader):
    cdef Py_ssize_t j
    cdef long c = 0
    cdef double x = xs[slot], y = ys[slot], m = ms[slot]
    cdef double dx, dy, d2, t
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


def softcore_total_count(double[::1] xs, double[::1] ys, double[::1] ms,
                         Py_ssize_t n, bint invader):
    cdef Py_ssize_t i, j
    cdef long c = 0
    cdef double xi, yi, dx, dy, d2, t
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


def quadratic_insert_logsum(double[::1] xs, double[::1] ys, double[::1] ms,
                            Py_ssize_t n, double x, double y, double m,
                            double r0, bint mark_scaled):
    cdef Py_ssize_t j
    cdef double s = 0.0
    cdef double dx, dy, d2, r, w, v
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
            return -INFINITY
        s += log(v)
    return s


def quadratic_delete_logsum(double[::1] xs, double[::1] ys, double[::1] ms,
                            Py_ssize_t n, Py_ssize_t slot,
                            double r0, bint mark_scaled):
    cdef Py_ssize_t j
    cdef double x = xs[slot], y = ys[slot], m = ms[slot]
    cdef double s = 0.0
    cdef double dx, dy, d2, r, w, v
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
            return -INFINITY
        s += log(v)
    return s


def quadratic_total_logsum(double[::1] xs, double[::1] ys, double[::1] ms,
                           Py_ssize_t n, double r0, bint mark_scaled):
    cdef Py_ssize_t i, j
    cdef double s = 0.0
    cdef double xi, yi, mi, dx, dy, d2, r, w, v
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
                return -INFINITY
            s += log(v)
    return s


def min_dist_sq(double[::1] xs, double[::1] ys, Py_ssize_t n,
                double x, double y):
    cdef Py_ssize_t j
    cdef double best = INFINITY
    cdef double dx, dy, d2
    for j in range(n):
        dx = x - xs[j]
        dy = y - ys[j]
        d2 = dx * dx + dy * dy
        if d2 < best:
            best = d2
    return best


def admissible_mass(double[::1] gx, double[::1] gy, double[::1] gw,
                    Py_ssize_t ncells, double[::1] xs, double[::1] ys,
                    Py_ssize_t n, double r):
    cdef Py_ssize_t c, j
    cdef double r2 = r * r
    cdef double total = 0.0
    cdef double cx, cy, dx, dy
    cdef bint ok
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
