"""Backend selection for the per-point kernels.

The compiled ``_ext`` module is used when it imports; otherwise the numpy
implementations in ``_pycore``.  Set ``BERGMAN_LAB_PURE_PYTHON=1`` to force
the fallback.  Wrappers broadcast their arguments to contiguous (n, 3)
complex128 arrays so both backends see the same layout.
"""

from __future__ import annotations

import os

import numpy as np

from . import _pycore

_ext = None
if os.environ.get("BERGMAN_LAB_PURE_PYTHON") != "1":
    try:
        from . import _ext  # type: ignore[no-redef]
    except ImportError:  # pragma: no cover - depends on build
        _ext = None

BACKEND = "cython" if _ext is not None else "numpy"


def backends() -> dict:
    """Map of available backend name -> module."""
    out = {"numpy": _pycore}
    if _ext is not None:
        out["cython"] = _ext
    return out


def _impl(backend: str | None):
    if backend is None:
        return _ext if _ext is not None else _pycore
    try:
        return backends()[backend]
    except KeyError:
        raise ValueError(f"backend {backend!r} unavailable; have {sorted(backends())}") from None


def _rows(*arrays):
    arrs = np.broadcast_arrays(*[np.asarray(a, dtype=np.complex128) for a in arrays])
    shape = arrs[0].shape[:-1]
    flat = [np.ascontiguousarray(a.reshape(-1, a.shape[-1])) for a in arrs]
    return shape, flat


def opnorm_sq(p, backend: str | None = None) -> np.ndarray:
    shape, (rows,) = _rows(p)
    return _impl(backend).opnorm_sq_rows(rows).reshape(shape)


def tetra_norm_sq(x, backend: str | None = None) -> np.ndarray:
    shape, (rows,) = _rows(x)
    return _impl(backend).tetra_norm_sq_rows(rows).reshape(shape)


def rii_det(t, s, backend: str | None = None) -> np.ndarray:
    shape, (a, b) = _rows(t, s)
    return _impl(backend).rii_det_rows(a, b).reshape(shape)


def rii_kernel(t, s, inv_vol: float, backend: str | None = None) -> np.ndarray:
    shape, (a, b) = _rows(t, s)
    return _impl(backend).rii_kernel_rows(a, b, float(inv_vol)).reshape(shape)


def tetra_num_den(x, y, backend: str | None = None) -> tuple[np.ndarray, np.ndarray]:
    shape, (a, b) = _rows(x, y)
    num, den = _impl(backend).tetra_num_den_rows(a, b)
    return num.reshape(shape), den.reshape(shape)


def tetra_kernel(x, y, inv_vol: float, backend: str | None = None) -> np.ndarray:
    shape, (a, b) = _rows(x, y)
    return _impl(backend).tetra_kernel_rows(a, b, float(inv_vol)).reshape(shape)
