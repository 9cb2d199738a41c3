# cython: language_level=3
# cython: boundscheck=False
# cython: wraparound=False
# cython: cdivision=True
"""Compiled per-trial kernels.

Each function transliterates its counterpart in _fallback.py: identical
arithmetic expressions evaluated in identical order, so counts and masks
are bitwise equal across backends (the build disables FP contraction to
keep the float paths equal too).
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport floor, sqrt

cnp.import_array()

BACKEND = "compiled"

DEF MAX_POLY = 1024


def cell_area(xs, ys, double half_width):
    """Origin Voronoi cell area among sorted candidates; see _fallback.cell_area."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] cxs = np.ascontiguousarray(xs, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] cys = np.ascontiguousarray(ys, dtype=np.float64)
    cdef Py_ssize_t n = cxs.shape[0]
    cdef double hw = half_width
    cdef double px[MAX_POLY]
    cdef double py[MAX_POLY]
    cdef double qx[MAX_POLY]
    cdef double qy[MAX_POLY]
    cdef Py_ssize_t m = 4
    px[0] = -hw; py[0] = -hw
    px[1] = hw;  py[1] = -hw
    px[2] = hw;  py[2] = hw
    px[3] = -hw; py[3] = hw
    cdef double max_r2 = 2.0 * hw * hw
    cdef Py_ssize_t used = 0
    cdef int complete = 0
    cdef Py_ssize_t i, k, k1, mq
    cdef double cx, cy, d2, h, sa, sb, t, r2, area2
    for i in range(n):
        cx = cxs[i]
        cy = cys[i]
        d2 = cx * cx + cy * cy
        if d2 >= 4.0 * max_r2:
            complete = 1
            break
        used += 1
        h = 0.5 * d2
        mq = 0
        sa = px[0] * cx + py[0] * cy - h
        for k in range(m):
            k1 = k + 1
            if k1 == m:
                k1 = 0
            sb = px[k1] * cx + py[k1] * cy - h
            if sa <= 0.0:
                qx[mq] = px[k]
                qy[mq] = py[k]
                mq += 1
            if (sa <= 0.0) != (sb <= 0.0):
                t = sa / (sa - sb)
                qx[mq] = px[k] + t * (px[k1] - px[k])
                qy[mq] = py[k] + t * (py[k1] - py[k])
                mq += 1
            sa = sb
            if mq >= MAX_POLY - 2:
                raise ValueError("polygon buffer overflow")
        for k in range(mq):
            px[k] = qx[k]
            py[k] = qy[k]
        m = mq
        if m < 3:
            return 0.0, 0.0, used, 0
        max_r2 = 0.0
        for k in range(m):
            r2 = px[k] * px[k] + py[k] * py[k]
            if r2 > max_r2:
                max_r2 = r2
    area2 = 0.0
    for k in range(m):
        k1 = k + 1
        if k1 == m:
            k1 = 0
        area2 += px[k] * py[k1] - px[k1] * py[k]
    return 0.5 * area2, sqrt(max_r2), used, complete


def count_in_cell(lx, ly, loff, ex, ey, eoff):
    """Per-trial counts of legit points nearer the origin than any eavesdropper."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] clx = np.ascontiguousarray(lx, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] cly = np.ascontiguousarray(ly, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] cex = np.ascontiguousarray(ex, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] cey = np.ascontiguousarray(ey, dtype=np.float64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] cloff = np.ascontiguousarray(loff, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] ceoff = np.ascontiguousarray(eoff, dtype=np.int64)
    cdef Py_ssize_t trials = cloff.shape[0] - 1
    cdef cnp.ndarray[cnp.int64_t, ndim=1] counts = np.zeros(trials, dtype=np.int64)
    cdef Py_ssize_t t, j, k, l0, l1, e0, e1
    cdef double x, y, r2, d2min, dx, dy, d2
    cdef long long c
    with nogil:
        for t in range(trials):
            l0 = cloff[t]; l1 = cloff[t + 1]
            e0 = ceoff[t]; e1 = ceoff[t + 1]
            if l1 == l0:
                continue
            if e1 == e0:
                counts[t] = l1 - l0
                continue
            c = 0
            for j in range(l0, l1):
                x = clx[j]
                y = cly[j]
                r2 = x * x + y * y
                d2min = -1.0
                for k in range(e0, e1):
                    dx = x - cex[k]
                    dy = y - cey[k]
                    d2 = dx * dx + dy * dy
                    if d2min < 0.0 or d2 < d2min:
                        d2min = d2
                if r2 < d2min:
                    c += 1
            counts[t] = c
    return counts


def neutral_survivors(ex, ey, lx, ly, double radius):
    """Mask of eavesdroppers with no legitimate point within radius; see _fallback."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] cex = np.ascontiguousarray(ex, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] cey = np.ascontiguousarray(ey, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] clx = np.ascontiguousarray(lx, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] cly = np.ascontiguousarray(ly, dtype=np.float64)
    cdef Py_ssize_t m = cex.shape[0]
    cdef Py_ssize_t nl = clx.shape[0]
    if m == 0:
        return np.zeros(0, dtype=bool)
    if nl == 0 or radius <= 0.0:
        return np.ones(m, dtype=bool)
    cdef double cell = radius
    cdef double off = 0.0
    cdef Py_ssize_t i
    cdef double a
    for i in range(nl):
        a = clx[i] if clx[i] >= 0.0 else -clx[i]
        if a > off: off = a
        a = cly[i] if cly[i] >= 0.0 else -cly[i]
        if a > off: off = a
    for i in range(m):
        a = cex[i] if cex[i] >= 0.0 else -cex[i]
        if a > off: off = a
        a = cey[i] if cey[i] >= 0.0 else -cey[i]
        if a > off: off = a
    off += cell
    cdef Py_ssize_t k = <Py_ssize_t>floor(2.0 * off / cell) + 2
    # counting-sort legit points into k*k cells (CSR layout)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] keys = np.empty(nl, dtype=np.int64)
    cdef Py_ssize_t ix, iy
    for i in range(nl):
        ix = <Py_ssize_t>floor((clx[i] + off) / cell)
        iy = <Py_ssize_t>floor((cly[i] + off) / cell)
        keys[i] = ix * k + iy
    cdef cnp.ndarray[cnp.int64_t, ndim=1] order = np.argsort(keys, kind="stable")
    cdef cnp.ndarray[cnp.int64_t, ndim=1] keys_s = keys[order]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] lx_s = clx[order]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ly_s = cly[order]
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] out = np.ones(m, dtype=np.uint8)
    cdef double r2 = radius * radius
    cdef Py_ssize_t e, dxc, dyc, lo, hi, p
    cdef cnp.int64_t key
    cdef double ddx, ddy
    cdef int hit
    with nogil:
        for e in range(m):
            ix = <Py_ssize_t>floor((cex[e] + off) / cell)
            iy = <Py_ssize_t>floor((cey[e] + off) / cell)
            hit = 0
            for dxc in range(-1, 2):
                if hit:
                    break
                for dyc in range(-1, 2):
                    key = (ix + dxc) * k + (iy + dyc)
                    lo = _lower_bound(&keys_s[0], nl, key)
                    hi = lo
                    while hi < nl and keys_s[hi] == key:
                        hi += 1
                    for p in range(lo, hi):
                        ddx = cex[e] - lx_s[p]
                        ddy = cey[e] - ly_s[p]
                        if ddx * ddx + ddy * ddy <= r2:
                            hit = 1
                            break
                    if hit:
                        break
            if hit:
                out[e] = 0
    return out.view(bool)


cdef Py_ssize_t _lower_bound(cnp.int64_t* arr, Py_ssize_t n, cnp.int64_t v) noexcept nogil:
    cdef Py_ssize_t lo = 0, hi = n, mid
    while lo < hi:
        mid = (lo + hi) // 2
        if arr[mid] < v:
            lo = mid + 1
        else:
            hi = mid
    return lo
