"""Pure-numpy terrain kernels.

Reference implementation of the hot-path queries.  The compiled module
``_native`` mirrors these signatures exactly; both operate on the per-window
coefficient tensor precomputed by ``terrain.TerrainSurface`` with shape
(cells_y, cells_x, 4, 4) so a height query is a single bicubic form.

All kernels return the index of the first query that fell outside the
evaluable footprint, or -1 if every query was valid.  Outputs for invalid
queries are unspecified; callers raise before using them.
"""

import numpy as np

BACKEND = "pure"


def _locate(coords, origin, inv_spacing, n_cells):
    # Map world coordinates to (cell index, local fraction in [0, 1]).
    t = (np.asarray(coords, dtype=float) - origin) * inv_spacing - 1.0
    with np.errstate(invalid="ignore"):
        bad = ~((t >= 0.0) & (t <= float(n_cells)))
    t = np.where(bad, 0.0, t)
    cell = np.clip(np.floor(t).astype(np.intp), 0, n_cells - 1)
    frac = t - cell
    return cell, frac, bad


def _first_bad(bad_x, bad_y):
    bad = bad_x | bad_y
    if bad.any():
        return int(np.argmax(bad))
    return -1


def _powers(t):
    t = np.asarray(t, dtype=float)
    return np.stack([t * t * t, t * t, t, np.ones_like(t)], axis=-1)


def _powers_d1(t):
    t = np.asarray(t, dtype=float)
    return np.stack([3.0 * t * t, 2.0 * t, np.ones_like(t), np.zeros_like(t)], axis=-1)


def surface_heights(coeff, origin_x, origin_y, inv_spacing, xs, ys, out):
    n_cy, n_cx = coeff.shape[0], coeff.shape[1]
    cx, v, bad_x = _locate(xs, origin_x, inv_spacing, n_cx)
    cy, w, bad_y = _locate(ys, origin_y, inv_spacing, n_cy)
    first_bad = _first_bad(bad_x, bad_y)
    q = coeff[cy, cx]
    out[...] = np.einsum("km,kmn,kn->k", _powers(v), q, _powers(w))
    return first_bad


def surface_heights_grads(coeff, origin_x, origin_y, inv_spacing, xs, ys, out_z, out_gx, out_gy):
    n_cy, n_cx = coeff.shape[0], coeff.shape[1]
    cx, v, bad_x = _locate(xs, origin_x, inv_spacing, n_cx)
    cy, w, bad_y = _locate(ys, origin_y, inv_spacing, n_cy)
    first_bad = _first_bad(bad_x, bad_y)
    q = coeff[cy, cx]
    vp, wp = _powers(v), _powers(w)
    out_z[...] = np.einsum("km,kmn,kn->k", vp, q, wp)
    # Chain rule: d/dx = (d/dv) * inv_spacing, likewise for y.
    out_gx[...] = np.einsum("km,kmn,kn->k", _powers_d1(v), q, wp) * inv_spacing
    out_gy[...] = np.einsum("km,kmn,kn->k", vp, q, _powers_d1(w)) * inv_spacing
    return first_bad


def wheel_contact_geometry(coeff, origin_x, origin_y, inv_spacing, rot, com, offsets, out_points, out_gaps):
    # World wheel points are com + R @ offset; gaps are vertical clearances.
    np.matmul(offsets, np.asarray(rot, dtype=float).T, out=out_points)
    out_points += com
    first_bad = surface_heights(
        coeff, origin_x, origin_y, inv_spacing, out_points[:, 0], out_points[:, 1], out_gaps
    )
    np.subtract(out_points[:, 2], out_gaps, out=out_gaps)
    return first_bad
