"""Zeros of the tetrablock Bergman kernel.

Along the axis ``phi(0, 0, u)`` the kernel depends only on ``c = u conj(v)``:

    V K_E(phi(0,0,u), phi(0,0,v)) = (3 + 10 c^2 + 3 c^4) / (1 - c^2)^6,

so with ``u = 1`` on the boundary the zero set is cut out by
``6 + 20 t^2 + 6 t^4``, and rescaling ``(u, v) -> (r u, v / r)`` moves a zero
into the interior of E x E.
"""

from __future__ import annotations

import cmath
import math
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import Polynomial

from . import geometry, kernels, maps
from .errors import CriticalValue, OutOfRange
from .kernels import VolumeConstant

UNIT_VOLUME = VolumeConstant(1.0)
Z0 = 1j / math.sqrt(3.0)
PROBE_RADIUS = 0.01
PROBE_ANGLES = 8


@dataclass
class ZeroCertificate:
    pair: tuple[tuple[complex, ...], tuple[complex, ...]]
    kernel_value: complex
    relative_residual: float
    membership: tuple[bool, bool]
    method: str
    scale: float = float("nan")
    params: tuple[complex, complex] | None = None
    extra: dict = field(default_factory=dict)

    @property
    def interior(self) -> bool:
        return all(self.membership)

    def to_dict(self) -> dict:
        enc = lambda p: [[float(c.real), float(c.imag)] for c in p]
        out = {
            "pair": [enc(self.pair[0]), enc(self.pair[1])],
            "kernel_value": [self.kernel_value.real, self.kernel_value.imag],
            "relative_residual": self.relative_residual,
            "membership": list(self.membership),
            "method": self.method,
            "scale": self.scale,
        }
        if self.params is not None:
            out["params"] = enc(self.params)
        out.update(self.extra)
        return out


# ---------------------------------------------------------------------------
# axis polynomial


def axis_family_polynomial() -> Polynomial:
    """6 + 20 t^2 + 6 t^4."""
    return Polynomial([6.0, 0.0, 20.0, 0.0, 6.0])


@dataclass(frozen=True)
class AxisRoot:
    root: complex
    in_disc: bool
    residual: float

    def to_dict(self) -> dict:
        return {"root": [self.root.real, self.root.imag], "in_disc": self.in_disc,
                "residual": self.residual}


def isolate_axis_roots() -> list[AxisRoot]:
    """All four roots, solved as a quadratic in u = t^2; in-disc roots first."""
    poly = axis_family_polynomial()
    a, b, c = poly.coef[4], poly.coef[2], poly.coef[0]
    disc = math.sqrt(b * b - 4 * a * c)
    # numerically stable pair: q = -(b + sign(b) sqrt(disc)) / 2
    q = -0.5 * (b + math.copysign(disc, b))
    us = sorted([c / q, q / a], key=abs)
    roots = []
    for u in us:
        t = cmath.sqrt(u)
        for r in (t, -t):
            roots.append(AxisRoot(r, abs(r) < 1.0, float(abs(poly(r)))))
    return roots


def boundary_axis_kernel(v, V: VolumeConstant = UNIT_VOLUME):
    """K_E(phi(0,0,1), phi(0,0,v)) with the first point on the closure."""
    v = np.asarray(v, dtype=np.complex128)
    x = np.array([0, 0, -1], dtype=np.complex128)
    y = np.stack([np.zeros_like(v), np.zeros_like(v), -v * v], axis=-1)
    return kernels.kernel_tetrablock_closed(x, y, V, closure=True)


# ---------------------------------------------------------------------------
# certificates


def _probe_pairs(x: np.ndarray, y: np.ndarray, radius: float = PROBE_RADIUS,
                 n_angles: int = PROBE_ANGLES) -> tuple[np.ndarray, np.ndarray]:
    ring = radius * np.exp(2j * np.pi * np.arange(n_angles) / n_angles)
    xs, ys = [], []
    for which in (0, 1):
        for k in range(3):
            for e in ring:
                a, b = x.copy(), y.copy()
                (a if which == 0 else b)[k] += e
                xs.append(a)
                ys.append(b)
    xs, ys = np.array(xs), np.array(ys)
    keep = geometry.is_member(geometry.TETRABLOCK, xs) & geometry.is_member(geometry.TETRABLOCK, ys)
    return xs[keep], ys[keep]


def local_kernel_scale(x, y, V: VolumeConstant = UNIT_VOLUME,
                       radius: float = PROBE_RADIUS) -> float:
    """max |K_E| over interior pairs on a radius-``radius`` ring around (x, y)."""
    xs, ys = _probe_pairs(np.asarray(x, complex), np.asarray(y, complex), radius)
    return float(np.max(np.abs(kernels.kernel_tetrablock_closed(xs, ys, V, check=False))))


def bell_scale_and_value(x, y, V: VolumeConstant = UNIT_VOLUME,
                         radius: float = PROBE_RADIUS) -> tuple[complex, float]:
    """Kernel value and probe scale recomputed with the generic Bell engine."""
    K_rii = kernels.rii_kernel(V, check=False)

    def bell(a, b):
        return kernels.bell_kernel_on_target(K_rii, maps.TETRA_MAP, a, b)

    value = complex(bell(np.asarray(x, complex), np.asarray(y, complex)))
    xs, ys = _probe_pairs(np.asarray(x, complex), np.asarray(y, complex), radius)
    vals = []
    for a, b in zip(xs, ys):
        try:
            vals.append(abs(bell(a, b)))
        except CriticalValue:
            continue
    return value, max(vals)


def certify(x, y, V: VolumeConstant = UNIT_VOLUME, method: str = "AxisRoot",
            params=None, bell: bool = True) -> ZeroCertificate:
    x = np.asarray(x, dtype=np.complex128)
    y = np.asarray(y, dtype=np.complex128)
    val = complex(kernels.kernel_tetrablock_closed(x, y, V, check=False))
    scale = local_kernel_scale(x, y, V)
    cert = ZeroCertificate(
        pair=(tuple(complex(c) for c in x), tuple(complex(c) for c in y)),
        kernel_value=val, relative_residual=abs(val) / scale,
        membership=(bool(geometry.is_member(geometry.TETRABLOCK, x)),
                    bool(geometry.is_member(geometry.TETRABLOCK, y))),
        method=method, scale=scale, params=params)
    if bell:
        bval, bscale = bell_scale_and_value(x, y, V)
        cert.extra["bell_value"] = [bval.real, bval.imag]
        cert.extra["bell_relative_residual"] = abs(bval) / bscale
    return cert


def axis_point(u) -> np.ndarray:
    """phi(0, 0, u) = (0, 0, -u^2)."""
    u = np.asarray(u, dtype=np.complex128)
    z = np.zeros_like(u)
    return np.stack([z, z, -u * u], axis=-1)


def interior_zero_pair(r: float, V: VolumeConstant = UNIT_VOLUME, conjugate: bool = False,
                       bell: bool = True) -> ZeroCertificate:
    """The interior pair (phi(0,0,r), phi(0,0,z0/r)), z0 = i/sqrt(3), |z0| < r < 1."""
    z0 = Z0.conjugate() if conjugate else Z0
    if not (abs(z0) < r < 1.0):
        raise OutOfRange(f"r={r} must satisfy |z0|={abs(z0):.6f} < r < 1")
    u, v = complex(r), z0 / r
    return certify(axis_point(u), axis_point(v), V, "AxisRoot", params=(u, v), bell=bell)


# ---------------------------------------------------------------------------
# grid scanning


@dataclass(frozen=True)
class PairFamily:
    """Two real parameters (a, b) -> a pair of tetrablock points.

    ``params`` maps (a, b) to the complex parameters (u, v) reported in CSV.
    """

    name: str
    pair: Callable[[np.ndarray, np.ndarray], tuple[np.ndarray, np.ndarray]]
    params: Callable[[np.ndarray, np.ndarray], tuple[np.ndarray, np.ndarray]]


def axis_family() -> PairFamily:
    """(u, v) = (a, i b): the pair (phi(0,0,u), phi(0,0,v))."""
    uv = lambda a, b: (np.asarray(a, complex), 1j * np.asarray(b, complex))

    def pair(a, b):
        u, v = uv(a, b)
        return axis_point(u), axis_point(v)

    return PairFamily("axis", pair, uv)


def diagonal_family() -> PairFamily:
    """K_E(p, p) along p = phi(a/2, b/2, 0.3); positive, hence zero-free."""

    def pair(a, b):
        a, b = np.asarray(a, complex), np.asarray(b, complex)
        lift = np.stack([0.5 * a, 0.5 * b, np.full_like(a, 0.3)], axis=-1)
        p = maps.forward(maps.TETRA_MAP, lift)
        return p, p

    def params(a, b):
        return np.asarray(a, complex), np.asarray(b, complex)

    return PairFamily("diagonal", pair, params)


FAMILIES = {"axis": axis_family, "diagonal": diagonal_family}


@dataclass(frozen=True)
class ScanGrid:
    a_range: tuple[float, float] = (0.1, 0.95)
    b_range: tuple[float, float] = (0.1, 0.95)
    na: int = 100
    nb: int = 100

    def axes(self) -> tuple[np.ndarray, np.ndarray]:
        return (np.linspace(*self.a_range, self.na), np.linspace(*self.b_range, self.nb))


def _abs_k(family: PairFamily, a, b, V) -> np.ndarray:
    x, y = family.pair(a, b)
    return np.abs(kernels.kernel_tetrablock_closed(x, y, V, check=False))


def _local_min(c, left, right) -> np.ndarray:
    # not above either neighbour, strictly below at least one (skips flat runs)
    return (c <= left) & (c <= right) & (c < np.maximum(left, right))


DEFAULT_GRID = ScanGrid()


def grid_scan_zeros(family: PairFamily, grid: ScanGrid = DEFAULT_GRID, tol: float = 1e-6,
                    V: VolumeConstant = UNIT_VOLUME, refine_tol: float = 1e-8,
                    max_iter: int = 200, bell: bool = False) -> list[ZeroCertificate]:
    """Zeros of K_E over a two-parameter family of pairs.

    Interior grid nodes that are local minima of |K_E| along their steeper
    grid direction are refined by bisection on the sign of the slope of
    |K_E|^2 along that direction, until the relative residual drops below
    ``refine_tol``.  A node yields a certificate when its refined residual is
    strictly below ``tol`` and both points are interior.  Output follows grid
    index order.
    """
    if not tol > 0:
        return []
    ga, gb = grid.axes()
    A, B = np.meshgrid(ga, gb, indexing="ij")
    absk = _abs_k(family, A, B, V)
    inner = absk[1:-1, 1:-1]
    da = np.abs(absk[2:, 1:-1] - absk[:-2, 1:-1])
    db = np.abs(absk[1:-1, 2:] - absk[1:-1, :-2])
    along_a = da >= db
    min_a = _local_min(inner, absk[:-2, 1:-1], absk[2:, 1:-1])
    min_b = _local_min(inner, absk[1:-1, :-2], absk[1:-1, 2:])
    cand = np.where(along_a, min_a, min_b)
    ii, jj = np.nonzero(cand)
    if len(ii) == 0:
        return []
    ii, jj = ii + 1, jj + 1
    dir_a = along_a[ii - 1, jj - 1]

    # brackets along the chosen direction; the other parameter stays fixed
    lo = np.where(dir_a, ga[ii - 1], gb[jj - 1])
    hi = np.where(dir_a, ga[ii + 1], gb[jj + 1])
    fixed = np.where(dir_a, gb[jj], ga[ii])

    def f(t):
        a = np.where(dir_a, t, fixed)
        b = np.where(dir_a, fixed, t)
        return _abs_k(family, a, b, V)

    # rough scale for the stopping rule; final residuals use the probe ring
    coarse = np.maximum(absk[ii - 1, jj], absk[ii + 1, jj])
    coarse = np.maximum(coarse, np.maximum(absk[ii, jj - 1], absk[ii, jj + 1]))
    mid = 0.5 * (lo + hi)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if np.all(f(mid) < 1e-3 * refine_tol * coarse) or np.all(hi - lo < 1e-15):
            break
        h = np.maximum(1e-3 * (hi - lo), 1e-16)
        left = f(mid - h) < f(mid + h)
        hi = np.where(left, mid, hi)
        lo = np.where(left, lo, mid)

    certs = []
    for k in np.lexsort((jj, ii)):
        a = mid[k] if dir_a[k] else fixed[k]
        b = fixed[k] if dir_a[k] else mid[k]
        x, y = family.pair(np.array(a), np.array(b))
        u, v = family.params(np.array(a), np.array(b))
        cert = certify(x, y, V, "GridScan", params=(complex(u), complex(v)), bell=bell)
        cert.extra["grid_index"] = [int(ii[k]), int(jj[k])]
        if cert.relative_residual < tol and cert.interior:
            certs.append(cert)
    return certs


# ---------------------------------------------------------------------------
# R_II contrast


def rii_min_kernel_ratio(n: int = 100_000, seed: int = 0,
                         V: VolumeConstant = UNIT_VOLUME) -> float:
    """min over random interior pairs of |K_RII| / (1/V)."""
    pts = geometry.sample_uniform(geometry.RII, 2 * n, seed).points
    vals = kernels.kernel_rii(pts[:n], pts[n:], V)
    return float(np.min(np.abs(vals)) * V.value)
