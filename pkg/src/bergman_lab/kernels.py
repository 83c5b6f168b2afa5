"""Bergman kernels: closed forms, the Bell pushforward engine and the
tetrablock kernel.

Kernels are holomorphic in the first argument and antiholomorphic in the
second.  Absolute normalisation of the R_II and tetrablock kernels comes from
an injected :class:`VolumeConstant`, so zero sets never depend on it.

Tetrablock closed form
----------------------
With lifts ``t+- = (x1, x2, +-s)`` of ``x`` and any lift ``w`` of ``y``,
``d+- = det(I - t+- conj(w))`` and Bell's formula gives

    K_E(x, y) = (K(t+, w) - K(t-, w)) / (Jphi(t+) conj(Jphi(w)))
              = (d+^2 + d+ d- + d-^2) / (V (d+ d-)^3),

using ``d- - d+ = 4 s conj(w3)``.  In terms of ``x`` and ``y`` directly,
``A = (d+ + d-)/2 = 1 - x1 y1* - x2 y2* + x3 y3*`` and
``P = d+ d- = A^2 - 4 (x1 x2 - x3) conj(y1 y2 - y3)``, so

    K_E(x, y) = (4 A^2 - P) / (V P^3),

which has no square roots and no removable singularity on x1 x2 = x3.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

from . import _core, geometry, maps
from .errors import CriticalValue, NonMember, PoleError
from .geometry import DomainDescriptor
from .maps import ProperMapDescriptor

CLOSURE_TOL = 1e-12
POLE_TOL = 1e-15


@dataclass(frozen=True)
class VolumeConstant:
    value: float
    stderr: float = 0.0
    n_samples: int = 0
    seed: int | tuple | None = None

    def __post_init__(self):
        if not self.value > 0:
            raise ValueError("volume must be positive")

    def to_dict(self) -> dict:
        return {"value": self.value, "stderr": self.stderr, "n": self.n_samples,
                "seed": self.seed}


@dataclass(frozen=True)
class KernelDescriptor:
    domain: DomainDescriptor
    evaluator: Callable = field(repr=False)
    closure_flag: bool = False
    name: str = ""

    def __call__(self, a, b):
        return self.evaluator(a, b)


def _scalar(out):
    return complex(out) if np.ndim(out) == 0 else out


def _require_interior(d: DomainDescriptor, p, what: str) -> None:
    inside = np.atleast_1d(geometry.is_member(d, p))
    if not np.all(inside):
        i = int(np.flatnonzero(~inside)[0])
        raise NonMember(f"{what} not interior to {d.name.value} (index {i})")


def _require_closure(norm_sq, what: str, dname: str) -> None:
    ok = np.atleast_1d(norm_sq <= 1.0 + CLOSURE_TOL)
    if not np.all(ok):
        i = int(np.flatnonzero(~ok)[0])
        raise NonMember(f"{what} outside the closure of {dname} (index {i})")


def _check_pole(den, what: str) -> None:
    bad = np.atleast_1d(np.abs(den) < POLE_TOL)
    if np.any(bad):
        raise PoleError(f"{what}: denominator vanishes (index {int(np.flatnonzero(bad)[0])})")


# ---------------------------------------------------------------------------
# closed forms


def kernel_disc(t, s) -> complex | np.ndarray:
    """1 / (pi (1 - t conj(s))^2).

    Accepts scalars or points with a trailing coordinate axis of length 1.
    """
    t = np.asarray(t, dtype=np.complex128)
    s = np.asarray(s, dtype=np.complex128)
    if t.ndim and t.shape[-1] == 1 and s.ndim and s.shape[-1] == 1:
        return kernel_polydisc(t, s)
    if np.any(np.abs(t) >= 1) or np.any(np.abs(s) >= 1):
        raise NonMember("disc kernel needs interior points")
    return _scalar(1.0 / (math.pi * (1.0 - t * np.conj(s)) ** 2))


def kernel_polydisc(t, s) -> complex | np.ndarray:
    """Product of disc kernels over the last axis."""
    t = np.asarray(t, dtype=np.complex128)
    s = np.asarray(s, dtype=np.complex128)
    if np.any(np.abs(t) >= 1) or np.any(np.abs(s) >= 1):
        raise NonMember("polydisc kernel needs interior points")
    vals = 1.0 / (math.pi * (1.0 - t * np.conj(s)) ** 2)
    return _scalar(np.prod(vals, axis=-1))


def kernel_rii(t, s, V: VolumeConstant, closure: bool = False,
               check: bool = True) -> complex | np.ndarray:
    """Hua's kernel det(I - t conj(s))^{-3} / V on R_II."""
    if check:
        _require_interior(geometry.RII, s, "second argument")
        if closure:
            _require_closure(_core.opnorm_sq(t), "first argument", "rii")
        else:
            _require_interior(geometry.RII, t, "first argument")
        d = _core.rii_det(t, s)
        _check_pole(d, "kernel_rii")
        return _scalar(1.0 / V.value / (d * d * d))
    return _scalar(_core.rii_kernel(t, s, 1.0 / V.value))


def kernel_tetrablock_closed(x, y, V: VolumeConstant, closure: bool = False,
                             check: bool = True) -> complex | np.ndarray:
    """Tetrablock kernel (4 A^2 - P) / (V P^3); see the module docstring."""
    if check:
        _require_interior(geometry.TETRABLOCK, y, "second argument")
        if closure:
            _require_closure(_core.tetra_norm_sq(x), "first argument", "tetrablock")
        else:
            _require_interior(geometry.TETRABLOCK, x, "first argument")
        num, den = _core.tetra_num_den(x, y)
        _check_pole(den, "kernel_tetrablock_closed")
        return _scalar(num / (V.value * den * den * den))
    return _scalar(_core.tetra_kernel(x, y, 1.0 / V.value))


def kernel_tetrablock_quotient(z, w, V: VolumeConstant) -> complex | np.ndarray:
    """Lift-level quotient (K(z, w) - K(z~, w)) / (Jphi(z) conj(Jphi(w))).

    ``z~`` flips the sign of the off-diagonal entry.  Undefined on the
    critical set; used to validate the closed form.
    """
    z = np.asarray(z, dtype=np.complex128)
    w = np.asarray(w, dtype=np.complex128)
    zf = maps.rotate_offdiag(z, -1.0)
    den = maps.jacobian(maps.TETRA_MAP, z) * np.conj(maps.jacobian(maps.TETRA_MAP, w))
    _check_pole(den, "quotient form on the critical set")
    num = _core.rii_kernel(z, w, 1.0 / V.value) - _core.rii_kernel(zf, w, 1.0 / V.value)
    return _scalar(num / den)


# ---------------------------------------------------------------------------
# Bell's transformation formula


def bell_pushforward(K_D: KernelDescriptor | Callable, m: ProperMapDescriptor | str, z, w,
                     eps_crit: float = maps.EPS_CRIT) -> complex | np.ndarray:
    """K_G(pi(z), pi(w)) from the source kernel via the local inverses of pi.

        K_G(pi z, pi w) = sum_k K_D(pi^k(pi z), w) J(pi^k)(pi z) / conj(J pi(w))
    """
    m = maps.get_map(m)
    z = np.asarray(z, dtype=np.complex128)
    w = np.asarray(w, dtype=np.complex128)
    jw = np.asarray(maps.jacobian(m, w))
    bad = np.atleast_1d(np.abs(jw) <= eps_crit)
    if np.any(bad):
        raise CriticalValue(f"second point is critical (index {int(np.flatnonzero(bad)[0])})")
    x = maps.forward(m, z)
    inv = maps.local_inverses(m, x, eps_crit)
    ijac = maps.inverse_jacobians(m, x, eps_crit)
    total = sum(K_D(inv[k], w) * ijac[k] for k in range(m.multiplicity))
    return _scalar(total / np.conj(jw))


def bell_kernel_on_target(K_D: KernelDescriptor | Callable, m: ProperMapDescriptor | str,
                          x, y, eps_crit: float = maps.EPS_CRIT) -> complex | np.ndarray:
    """Evaluate the pushed-forward kernel at target points via principal lifts."""
    m = maps.get_map(m)
    z = maps.local_inverses(m, x, eps_crit)[0]
    w = maps.local_inverses(m, y, eps_crit)[0]
    return bell_pushforward(K_D, m, z, w, eps_crit)


# ---------------------------------------------------------------------------
# descriptors and the volume constant


def disc_kernel() -> KernelDescriptor:
    return KernelDescriptor(geometry.DISC, kernel_disc, name="disc")


def polydisc_kernel(dim: int = 3) -> KernelDescriptor:
    return KernelDescriptor(geometry.polydisc(dim), kernel_polydisc, name=f"polydisc{dim}")


def rii_kernel(V: VolumeConstant, closure: bool = False, check: bool = True) -> KernelDescriptor:
    return KernelDescriptor(geometry.RII,
                            lambda t, s: kernel_rii(t, s, V, closure=closure, check=check),
                            closure_flag=closure, name="rii")


def tetrablock_kernel(V: VolumeConstant, closure: bool = False,
                      check: bool = True) -> KernelDescriptor:
    return KernelDescriptor(
        geometry.TETRABLOCK,
        lambda x, y: kernel_tetrablock_closed(x, y, V, closure=closure, check=check),
        closure_flag=closure, name="tetrablock")


def symbidisc_kernel() -> KernelDescriptor:
    """Symmetrized-bidisc kernel pushed forward from the bidisc (no closed form)."""
    src = polydisc_kernel(2)
    return KernelDescriptor(geometry.SYMBIDISC,
                            lambda x, y: bell_kernel_on_target(src, maps.SYM2_MAP, x, y),
                            name="symbidisc")


def rii_volume(n: int, seed: int = 0, workers: int = 1) -> VolumeConstant:
    """Monte Carlo Vol(R_II): pi^3 times the acceptance rate in the unit polydisc."""
    if n < 10_000:
        raise ValueError("rii_volume needs n >= 1e4")
    from .quadrature import mc_integrate

    est = mc_integrate(geometry.RII, None, n, seed, workers=workers)
    return VolumeConstant(value=est.value.real, stderr=est.stderr, n_samples=n, seed=seed)
