# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled terrain kernels.

Same contracts as ``_pure``: per-window coefficient tensor in, heights /
gradients / wheel gaps out, first out-of-footprint index (or -1) returned.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "native"


cdef inline int _locate(double coord, double origin, double inv_spacing,
                        Py_ssize_t n_cells, Py_ssize_t *cell, double *frac) noexcept nogil:
    cdef double t = (coord - origin) * inv_spacing - 1.0
    # The negated comparison also rejects NaN coordinates.
    if not (t >= 0.0 and t <= <double> n_cells):
        return -1
    cdef Py_ssize_t c = <Py_ssize_t> t
    if c >= n_cells:
        c = n_cells - 1
    cell[0] = c
    frac[0] = t - <double> c
    return 0


cdef inline double _form(const double[:, :, :, ::1] coeff, Py_ssize_t cy, Py_ssize_t cx,
                         double *vp, double *wp) noexcept nogil:
    cdef double acc = 0.0
    cdef double row
    cdef Py_ssize_t m, n
    for m in range(4):
        row = 0.0
        for n in range(4):
            row += coeff[cy, cx, m, n] * wp[n]
        acc += vp[m] * row
    return acc


cdef inline void _fill_powers(double t, double *p) noexcept nogil:
    p[0] = t * t * t
    p[1] = t * t
    p[2] = t
    p[3] = 1.0


cdef inline void _fill_powers_d1(double t, double *p) noexcept nogil:
    p[0] = 3.0 * t * t
    p[1] = 2.0 * t
    p[2] = 1.0
    p[3] = 0.0


def surface_heights(const double[:, :, :, ::1] coeff, double origin_x, double origin_y,
                    double inv_spacing, const double[::1] xs, const double[::1] ys,
                    double[::1] out):
    cdef Py_ssize_t n_cy = coeff.shape[0]
    cdef Py_ssize_t n_cx = coeff.shape[1]
    cdef Py_ssize_t k = xs.shape[0]
    cdef Py_ssize_t i, cx, cy
    cdef double v, w
    cdef double vp[4]
    cdef double wp[4]
    cdef Py_ssize_t first_bad = -1
    with nogil:
        for i in range(k):
            if _locate(xs[i], origin_x, inv_spacing, n_cx, &cx, &v) < 0 or \
               _locate(ys[i], origin_y, inv_spacing, n_cy, &cy, &w) < 0:
                if first_bad < 0:
                    first_bad = i
                out[i] = 0.0
                continue
            _fill_powers(v, vp)
            _fill_powers(w, wp)
            out[i] = _form(coeff, cy, cx, vp, wp)
    return first_bad


def surface_heights_grads(const double[:, :, :, ::1] coeff, double origin_x, double origin_y,
                          double inv_spacing, const double[::1] xs, const double[::1] ys,
                          double[::1] out_z, double[::1] out_gx, double[::1] out_gy):
    cdef Py_ssize_t n_cy = coeff.shape[0]
    cdef Py_ssize_t n_cx = coeff.shape[1]
    cdef Py_ssize_t k = xs.shape[0]
    cdef Py_ssize_t i, cx, cy
    cdef double v, w
    cdef double vp[4]
    cdef double wp[4]
    cdef double dp[4]
    cdef Py_ssize_t first_bad = -1
    with nogil:
        for i in range(k):
            if _locate(xs[i], origin_x, inv_spacing, n_cx, &cx, &v) < 0 or \
               _locate(ys[i], origin_y, inv_spacing, n_cy, &cy, &w) < 0:
                if first_bad < 0:
                    first_bad = i
                out_z[i] = 0.0
                out_gx[i] = 0.0
                out_gy[i] = 0.0
                continue
            _fill_powers(v, vp)
            _fill_powers(w, wp)
            out_z[i] = _form(coeff, cy, cx, vp, wp)
            _fill_powers_d1(v, dp)
            out_gx[i] = _form(coeff, cy, cx, dp, wp) * inv_spacing
            _fill_powers_d1(w, dp)
            out_gy[i] = _form(coeff, cy, cx, vp, dp) * inv_spacing
    return first_bad


def wheel_contact_geometry(const double[:, :, :, ::1] coeff, double origin_x, double origin_y,
                           double inv_spacing, const double[:, ::1] rot, const double[::1] com,
                           const double[:, ::1] offsets, double[:, ::1] out_points,
                           double[::1] out_gaps):
    cdef Py_ssize_t n_cy = coeff.shape[0]
    cdef Py_ssize_t n_cx = coeff.shape[1]
    cdef Py_ssize_t k = offsets.shape[0]
    cdef Py_ssize_t i, cx, cy
    cdef double px, py, pz, v, w
    cdef double vp[4]
    cdef double wp[4]
    cdef Py_ssize_t first_bad = -1
    with nogil:
        for i in range(k):
            px = com[0] + rot[0, 0] * offsets[i, 0] + rot[0, 1] * offsets[i, 1] + rot[0, 2] * offsets[i, 2]
            py = com[1] + rot[1, 0] * offsets[i, 0] + rot[1, 1] * offsets[i, 1] + rot[1, 2] * offsets[i, 2]
            pz = com[2] + rot[2, 0] * offsets[i, 0] + rot[2, 1] * offsets[i, 1] + rot[2, 2] * offsets[i, 2]
            out_points[i, 0] = px
            out_points[i, 1] = py
            out_points[i, 2] = pz
            if _locate(px, origin_x, inv_spacing, n_cx, &cx, &v) < 0 or \
               _locate(py, origin_y, inv_spacing, n_cy, &cy, &w) < 0:
                if first_bad < 0:
                    first_bad = i
                out_gaps[i] = 0.0
                continue
            _fill_powers(v, vp)
            _fill_powers(w, wp)
            out_gaps[i] = pz - _form(coeff, cy, cx, vp, wp)
    return first_bad
