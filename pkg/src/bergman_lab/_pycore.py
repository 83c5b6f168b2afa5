"""Pure-numpy implementations of the hot per-point kernels.

Every function takes complex128 arrays of shape (n, 3) (rows are points) and
returns a length-n array.  ``_ext.pyx`` mirrors these signatures exactly.
"""

from __future__ import annotations

import numpy as np

# below this sqrt(D) the squared terms may have underflowed
TINY_ROOT = 1e-140


def _sym_norm_sq(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    """||[[a, c], [c, b]]||^2 = (T + sqrt(D)) / 2.

    ``D = T^2 - 4|det|^2`` equals ``(|a|^2 - |b|^2)^2 + 4 |conj(a) c + conj(c) b|^2``,
    a sum of squares, so equal singular values cause no cancellation.  When
    ``D`` is tiny its fourth-power terms may underflow; those rows take the
    slower hypot route.
    """
    aa = a.real**2 + a.imag**2
    bb = b.real**2 + b.imag**2
    cc = c.real**2 + c.imag**2
    q = np.conj(a) * c + np.conj(c) * b
    dd = aa - bb
    root = np.sqrt(dd * dd + 4.0 * (q.real**2 + q.imag**2))
    tiny = root < TINY_ROOT
    if np.any(tiny):
        root[tiny] = np.hypot(dd[tiny], 2.0 * np.abs(q[tiny]))
    return 0.5 * (aa + bb + 2.0 * cc + root)


def opnorm_sq_rows(p: np.ndarray) -> np.ndarray:
    return _sym_norm_sq(p[:, 0], p[:, 1], p[:, 2])


def tetra_norm_sq_rows(x: np.ndarray) -> np.ndarray:
    # norm of a lift (x1, x2, s), s^2 = x1 x2 - x3; either root gives the same value
    a, b = x[:, 0], x[:, 1]
    return _sym_norm_sq(a, b, np.sqrt(a * b - x[:, 2]))


def rii_det_rows(t: np.ndarray, s: np.ndarray) -> np.ndarray:
    sc = np.conj(s)
    lin = t[:, 0] * sc[:, 0] + 2.0 * t[:, 2] * sc[:, 2] + t[:, 1] * sc[:, 1]
    return 1.0 - lin + (t[:, 0] * t[:, 1] - t[:, 2] ** 2) * (sc[:, 0] * sc[:, 1] - sc[:, 2] ** 2)


def rii_kernel_rows(t: np.ndarray, s: np.ndarray, inv_vol: float) -> np.ndarray:
    d = rii_det_rows(t, s)
    return inv_vol / (d * d * d)


def tetra_num_den_rows(x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(4A^2 - P, P)`` so that K_E = (4A^2 - P) / (V P^3)."""
    yc = np.conj(y)
    a = 1.0 - x[:, 0] * yc[:, 0] - x[:, 1] * yc[:, 1] + x[:, 2] * yc[:, 2]
    q = (x[:, 0] * x[:, 1] - x[:, 2]) * (yc[:, 0] * yc[:, 1] - yc[:, 2])
    p = a * a - 4.0 * q
    return 4.0 * a * a - p, p


def tetra_kernel_rows(x: np.ndarray, y: np.ndarray, inv_vol: float) -> np.ndarray:
    num, p = tetra_num_den_rows(x, y)
    return inv_vol * num / (p * p * p)
