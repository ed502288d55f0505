"""Kernel backend selection.

The package ships a compiled extension (``_native``, Cython) for the terrain
queries that sit inside the drop loop, plus a pure-numpy fallback (``_pure``)
with identical signatures.  The compiled module is preferred when importable;
``TERRAPOSE_KERNELS=pure`` (or ``native``) in the environment forces a choice.

``set_backend`` swaps the process-global dispatch; it exists for the
compiled-versus-pure benchmark and is not meant to be called concurrently
with running solves.
"""

import os

from . import _pure

_BACKENDS = {"pure": _pure}
try:
    from . import _native

    _BACKENDS["native"] = _native
except ImportError:
    _native = None

_FORCED = os.environ.get("TERRAPOSE_KERNELS")
if _FORCED:
    if _FORCED not in _BACKENDS:
        raise ImportError(
            f"TERRAPOSE_KERNELS={_FORCED!r} is not available; "
            f"choices: {sorted(_BACKENDS)}"
        )
    _impl = _BACKENDS[_FORCED]
else:
    _impl = _BACKENDS.get("native", _pure)


def backend_name():
    return _impl.BACKEND


def available_backends():
    return sorted(_BACKENDS)


def get_backend(name):
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ValueError(f"unknown kernel backend {name!r}; choices: {sorted(_BACKENDS)}") from None


def set_backend(name):
    """Switch the global kernel dispatch; returns the previous backend name."""
    global _impl
    previous = _impl.BACKEND
    _impl = get_backend(name)
    return previous


def surface_heights(coeff, origin_x, origin_y, inv_spacing, xs, ys, out):
    return _impl.surface_heights(coeff, origin_x, origin_y, inv_spacing, xs, ys, out)


def surface_heights_grads(coeff, origin_x, origin_y, inv_spacing, xs, ys, out_z, out_gx, out_gy):
    return _impl.surface_heights_grads(
        coeff, origin_x, origin_y, inv_spacing, xs, ys, out_z, out_gx, out_gy
    )


def wheel_contact_geometry(coeff, origin_x, origin_y, inv_spacing, rot, com, offsets, out_points, out_gaps):
    return _impl.wheel_contact_geometry(
        coeff, origin_x, origin_y, inv_spacing, rot, com, offsets, out_points, out_gaps
    )
