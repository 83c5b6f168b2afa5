"""Domains, membership predicates, the 2x2 symmetric operator norm and
uniform rejection sampling.

Points are complex vectors.  Every predicate accepts either a single point
(a length-``dim`` sequence) or a stacked array of shape ``(..., dim)`` and
returns a matching boolean (array).

Domains
-------
disc        unit disc in C
polydisc3   unit polydisc in C^3
rii         2x2 complex symmetric matrices [[z11, z], [z, z22]] of norm < 1
tetrablock  image of rii under (z11, z22, z) -> (z11, z22, z11 z22 - z^2)
symbidisc   image of the bidisc under (z1, z2) -> (z1 + z2, z1 z2)
"""

from __future__ import annotations

import cmath
import math
from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np

from . import _core
from .errors import BergmanLabError


class SymPoint(NamedTuple):
    """Coordinates (z11, z22, z) of the symmetric matrix [[z11, z], [z, z22]]."""

    z11: complex
    z22: complex
    z: complex

    def matrix(self) -> np.ndarray:
        return np.array([[self.z11, self.z], [self.z, self.z22]], dtype=complex)


class TetraPoint(NamedTuple):
    x1: complex
    x2: complex
    x3: complex


class DomainName(str, Enum):
    DISC = "disc"
    POLYDISC3 = "polydisc3"
    POLYDISC = "polydisc"  # unit polydisc of any other dimension
    RII = "rii"
    TETRABLOCK = "tetrablock"
    SYMBIDISC = "symbidisc"


@dataclass(frozen=True)
class DomainDescriptor:
    """A named domain with the per-coordinate radii of its sampling region.

    Samples are drawn uniformly from the product of discs with these radii,
    so ``box_volume`` is the product of ``pi * r**2``.
    """

    name: DomainName
    dimension: int
    radii: tuple[float, ...]

    @property
    def box_volume(self) -> float:
        return math.prod(math.pi * r * r for r in self.radii)

    def contains(self, p) -> np.ndarray | bool:
        return is_member(self, p)


DISC = DomainDescriptor(DomainName.DISC, 1, (1.0,))
POLYDISC3 = DomainDescriptor(DomainName.POLYDISC3, 3, (1.0, 1.0, 1.0))
RII = DomainDescriptor(DomainName.RII, 3, (1.0, 1.0, 1.0))
# |x3| = |det| <= ||A||^2 < 1 on the tetrablock
TETRABLOCK = DomainDescriptor(DomainName.TETRABLOCK, 3, (1.0, 1.0, 1.0))
# x1 = z1 + z2 ranges over the disc of radius 2
SYMBIDISC = DomainDescriptor(DomainName.SYMBIDISC, 2, (2.0, 1.0))
BIDISC = DomainDescriptor(DomainName.POLYDISC, 2, (1.0, 1.0))

DOMAINS: dict[str, DomainDescriptor] = {
    d.name.value: d for d in (DISC, POLYDISC3, RII, TETRABLOCK, SYMBIDISC)
}


def get_domain(name: str | DomainDescriptor) -> DomainDescriptor:
    if isinstance(name, DomainDescriptor):
        return name
    try:
        return DOMAINS[str(name).lower()]
    except KeyError:
        raise BergmanLabError(
            f"unknown domain {name!r}; expected one of {sorted(DOMAINS)}"
        ) from None


def polydisc(dim: int) -> DomainDescriptor:
    """Unit polydisc of arbitrary dimension (used as a Bell-engine source)."""
    if dim == 1:
        return DISC
    if dim == 3:
        return POLYDISC3
    if dim == 2:
        return BIDISC
    return DomainDescriptor(DomainName.POLYDISC, dim, (1.0,) * dim)


@dataclass
class SampleBatch:
    points: np.ndarray  # shape (n, dim), complex128
    seed: int | tuple
    acceptance_rate: float
    proposals: int = 0

    def __len__(self) -> int:
        return len(self.points)


# ---------------------------------------------------------------------------
# operator norm


def opnorm(p) -> float | np.ndarray:
    """Operator norm of the symmetric matrix identified with ``(z11, z22, z)``.

    Uses ``||A||^2 = (T + sqrt(T^2 - 4 |det A|^2)) / 2`` with
    ``T = |z11|^2 + |z22|^2 + 2|z|^2``.  Vectorised over leading axes.
    """
    arr = np.asarray(p, dtype=np.complex128)
    if arr.shape[-1] != 3:
        raise BergmanLabError(f"expected 3 coordinates, got shape {arr.shape}")
    out = np.sqrt(_core.opnorm_sq(arr))
    return float(out) if out.ndim == 0 else out


def principal_sqrt(w):
    return np.sqrt(np.asarray(w, dtype=np.complex128))


def tetra_lift(x) -> np.ndarray:
    """The lift (x1, x2, s) with s the principal root of x1 x2 - x3."""
    x = np.asarray(x, dtype=np.complex128)
    s = principal_sqrt(x[..., 0] * x[..., 1] - x[..., 2])
    return np.stack([x[..., 0], x[..., 1], s], axis=-1)


def _check_dim(d: DomainDescriptor, arr: np.ndarray) -> None:
    if arr.ndim == 0 or arr.shape[-1] != d.dimension:
        raise BergmanLabError(
            f"{d.name.value} expects points of dimension {d.dimension}, got shape {arr.shape}"
        )


def _as_points(d: DomainDescriptor, p) -> np.ndarray:
    arr = np.asarray(p, dtype=np.complex128)
    if d.dimension == 1 and arr.ndim == 0:
        arr = arr.reshape(1)
    _check_dim(d, arr)
    return arr


def quadratic_roots(b, c) -> tuple[np.ndarray, np.ndarray]:
    """Roots of ``t^2 - b t + c``, ordered by the local-inverse convention.

    Root with the larger imaginary part first; on ties the larger real part.
    """
    b = np.asarray(b, dtype=np.complex128)
    c = np.asarray(c, dtype=np.complex128)
    sq = np.sqrt(b * b - 4.0 * c)
    r1 = 0.5 * (b + sq)
    r2 = 0.5 * (b - sq)
    swap = (r2.imag > r1.imag) | ((r2.imag == r1.imag) & (r2.real > r1.real))
    return np.where(swap, r2, r1), np.where(swap, r1, r2)


def is_member(d: DomainDescriptor | str, p) -> bool | np.ndarray:
    """Interior membership; boundary points (norm exactly 1) are excluded."""
    d = get_domain(d)
    arr = _as_points(d, p)
    name = d.name
    if name is DomainName.DISC:
        res = np.abs(arr[..., 0]) < 1.0
    elif name in (DomainName.POLYDISC3, DomainName.POLYDISC):
        res = np.all(np.abs(arr) < 1.0, axis=-1)
    elif name is DomainName.RII:
        res = _core.opnorm_sq(arr) < 1.0
    elif name is DomainName.TETRABLOCK:
        res = _core.tetra_norm_sq(arr) < 1.0
    elif name is DomainName.SYMBIDISC:
        r1, r2 = quadratic_roots(arr[..., 0], arr[..., 1])
        res = (np.abs(r1) < 1.0) & (np.abs(r2) < 1.0)
    else:  # pragma: no cover
        raise BergmanLabError(f"no membership rule for {name}")
    return bool(res) if np.ndim(res) == 0 else res


def is_member_tetra_via_lift(x: Sequence[complex]) -> bool:
    """Scalar tetrablock test through an explicit principal square root."""
    x1, x2, x3 = (complex(v) for v in x)
    s = cmath.sqrt(x1 * x2 - x3)
    return opnorm((x1, x2, s)) < 1.0


# ---------------------------------------------------------------------------
# sampling


def _seed_sequence(seed) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    if isinstance(seed, (tuple, list)):
        return np.random.SeedSequence([int(v) for v in seed])
    return np.random.SeedSequence(int(seed))


def substreams(seed, workers: int) -> list[np.random.Generator]:
    """Independent generators for ``workers`` ranges, spawned from ``seed``."""
    return [np.random.default_rng(s) for s in _seed_sequence(seed).spawn(max(1, int(workers)))]


def draw_box(d: DomainDescriptor, n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` points uniform on the product of discs with radii ``d.radii``."""
    u = rng.random((n, d.dimension))
    theta = rng.random((n, d.dimension)) * (2.0 * math.pi)
    r = np.sqrt(u) * np.asarray(d.radii)
    return r * np.cos(theta) + 1j * (r * np.sin(theta))


def _accept_n(d: DomainDescriptor, n: int, rng: np.random.Generator,
              chunk: int) -> tuple[np.ndarray, int, int]:
    parts, have, proposals = [], 0, 0
    while have < n:
        box = draw_box(d, chunk, rng)
        proposals += chunk
        keep = box[is_member(d, box)]
        parts.append(keep)
        have += len(keep)
    return np.concatenate(parts)[:n], proposals, have


def sample_uniform(d: DomainDescriptor | str, n: int, seed: int = 0, workers: int = 1,
                   chunk: int = 1 << 16) -> SampleBatch:
    """Uniform samples on ``d`` by rejection from its polydisc box.

    Worker ``k`` fills its quota from substream ``k`` of ``seed``; the output
    is the concatenation in worker order, so it is a deterministic function
    of ``(seed, workers)``.  ``acceptance_rate`` counts every accepted
    proposal (including the overshoot of the last chunk) over every proposal
    drawn, i.e. it estimates ``Vol(d) / box_volume``.
    """
    d = get_domain(d)
    if n < 1:
        raise BergmanLabError("sample_uniform needs n >= 1")
    workers = max(1, min(int(workers), n))
    quotas = [n // workers + (1 if k < n % workers else 0) for k in range(workers)]
    parts, proposals, accepted = [], 0, 0
    for rng, q in zip(substreams(seed, workers), quotas):
        kept, prop, acc = _accept_n(d, q, rng, max(256, min(chunk, 4 * q)))
        parts.append(kept)
        proposals += prop
        accepted += acc
    return SampleBatch(points=np.concatenate(parts), seed=seed,
                       acceptance_rate=accepted / proposals, proposals=proposals)
