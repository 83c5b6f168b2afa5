"""Proper holomorphic maps with their Jacobians, local inverses and deck groups.

Two maps are bundled:

``tetra``  R_II -> tetrablock, (z11, z22, z) -> (z11, z22, z11 z22 - z^2), m = 2
``sym2``   bidisc -> symmetrized bidisc, (z1, z2) -> (z1 + z2, z1 z2), m = 2

All point-wise functions are vectorised over leading axes.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import geometry
from .errors import BergmanLabError, CriticalValue, SearchExhausted
from .geometry import DomainDescriptor, SampleBatch, opnorm

EPS_CRIT = 1e-14


class MapName(str, Enum):
    TETRA = "tetra"
    SYM2 = "sym2"


@dataclass(frozen=True)
class TransformGroup:
    """Finite group of invertible linear maps, checked for closure on creation."""

    elements: tuple[np.ndarray, ...]
    name: str = ""

    def __post_init__(self):
        mats = tuple(np.asarray(e, dtype=np.complex128) for e in self.elements)
        object.__setattr__(self, "elements", mats)
        n = mats[0].shape[0]
        if not any(np.allclose(e, np.eye(n), atol=1e-12) for e in mats):
            raise BergmanLabError("transform group must contain the identity")
        for a, b in itertools.product(mats, repeat=2):
            if self.index_of(a @ b) is None:
                raise BergmanLabError("transform group is not closed under composition")
        for a in mats:
            if self.index_of(np.linalg.inv(a)) is None:
                raise BergmanLabError("transform group is not closed under inverses")

    def index_of(self, mat: np.ndarray) -> int | None:
        for i, e in enumerate(self.elements):
            if e.shape == mat.shape and np.allclose(e, mat, atol=1e-12):
                return i
        return None

    def __len__(self) -> int:
        return len(self.elements)

    def orbit(self, p) -> np.ndarray:
        """Images of ``p`` (shape (..., dim)) under every element: (len, ..., dim)."""
        p = np.asarray(p, dtype=np.complex128)
        return np.stack([p @ u.T for u in self.elements])


def tetra_deck_group() -> TransformGroup:
    return TransformGroup((np.eye(3), np.diag([1.0, 1.0, -1.0])), name="U_E")


def swap_group() -> TransformGroup:
    return TransformGroup((np.eye(2), np.array([[0.0, 1.0], [1.0, 0.0]])), name="S2")


@dataclass(frozen=True)
class ProperMapDescriptor:
    name: MapName
    source: DomainDescriptor
    target: DomainDescriptor
    multiplicity: int
    deck_group: TransformGroup = field(repr=False, compare=False, default=None)

    def forward(self, p):
        return forward(self, p)

    def jacobian(self, p):
        return jacobian(self, p)

    def local_inverses(self, x, eps_crit: float = EPS_CRIT):
        return local_inverses(self, x, eps_crit)


TETRA_MAP = ProperMapDescriptor(MapName.TETRA, geometry.RII, geometry.TETRABLOCK, 2,
                                tetra_deck_group())
SYM2_MAP = ProperMapDescriptor(MapName.SYM2, geometry.BIDISC, geometry.SYMBIDISC, 2,
                               swap_group())

MAPS: dict[str, ProperMapDescriptor] = {"tetra": TETRA_MAP, "sym2": SYM2_MAP}


def get_map(name: str | ProperMapDescriptor) -> ProperMapDescriptor:
    if isinstance(name, ProperMapDescriptor):
        return name
    try:
        return MAPS[str(name).lower()]
    except KeyError:
        raise BergmanLabError(f"unknown map {name!r}; expected one of {sorted(MAPS)}") from None


def _pts(m: ProperMapDescriptor, p, which: str = "source") -> np.ndarray:
    arr = np.asarray(p, dtype=np.complex128)
    dim = getattr(m, which).dimension
    if arr.shape[-1:] != (dim,):
        raise BergmanLabError(f"{m.name.value} expects {dim} coordinates, got shape {arr.shape}")
    return arr


def forward(m: ProperMapDescriptor | str, p) -> np.ndarray:
    m = get_map(m)
    p = _pts(m, p)
    if m.name is MapName.TETRA:
        a, b, c = p[..., 0], p[..., 1], p[..., 2]
        return np.stack([a, b, a * b - c * c], axis=-1)
    z1, z2 = p[..., 0], p[..., 1]
    return np.stack([z1 + z2, z1 * z2], axis=-1)


def jacobian(m: ProperMapDescriptor | str, p) -> np.ndarray | complex:
    """Complex Jacobian determinant of the forward map."""
    m = get_map(m)
    p = _pts(m, p)
    if m.name is MapName.TETRA:
        out = -2.0 * p[..., 2]
    else:
        out = p[..., 0] - p[..., 1]
    return complex(out) if np.ndim(out) == 0 else out


def discriminant(m: ProperMapDescriptor | str, x) -> np.ndarray:
    """Quantity whose vanishing marks the critical values of ``m``."""
    m = get_map(m)
    x = _pts(m, x, "target")
    if m.name is MapName.TETRA:
        return x[..., 0] * x[..., 1] - x[..., 2]
    return x[..., 0] ** 2 - 4.0 * x[..., 1]


def _guard(disc: np.ndarray, eps_crit: float, what: str) -> None:
    bad = np.abs(disc) < eps_crit
    if np.any(bad) or np.any(disc == 0):
        idx = int(np.flatnonzero(np.ravel(bad | (disc == 0)))[0])
        raise CriticalValue(f"{what}: discriminant {complex(np.ravel(disc)[idx])} "
                            f"below {eps_crit:g} at index {idx}")


def local_inverses(m: ProperMapDescriptor | str, x, eps_crit: float = EPS_CRIT) -> np.ndarray:
    """All preimages of ``x``; shape (multiplicity, ..., source_dim).

    Ordering: principal square root first (tetra), root with the larger
    imaginary part first, ties by larger real part (sym2).
    """
    m = get_map(m)
    x = _pts(m, x, "target")
    disc = discriminant(m, x)
    _guard(disc, eps_crit, f"{m.name.value} local inverses")
    if m.name is MapName.TETRA:
        s = np.sqrt(disc)
        a, b = x[..., 0], x[..., 1]
        return np.stack([np.stack([a, b, s], axis=-1), np.stack([a, b, -s], axis=-1)])
    r1, r2 = geometry.quadratic_roots(x[..., 0], x[..., 1])
    return np.stack([np.stack([r1, r2], axis=-1), np.stack([r2, r1], axis=-1)])


def inverse_jacobians(m: ProperMapDescriptor | str, x, eps_crit: float = EPS_CRIT) -> np.ndarray:
    """Jacobian determinants of each local inverse at ``x``; shape (multiplicity, ...).

    tetra: the inverse (x1, x2, +-sqrt(x1 x2 - x3)) has determinant -+1/(2 s).
    sym2: the inverse x -> (r1, r2) has determinant 1/(r1 - r2).
    """
    m = get_map(m)
    inv = local_inverses(m, x, eps_crit)
    if m.name is MapName.TETRA:
        s = inv[0][..., 2]
        return np.stack([-0.5 / s, 0.5 / s])
    d = inv[0][..., 0] - inv[0][..., 1]
    return np.stack([1.0 / d, -1.0 / d])


# ---------------------------------------------------------------------------
# checkers


@dataclass
class DeckReport:
    map: str
    group: str
    n_samples: int
    passed: bool
    max_forward_error: float = 0.0
    max_fiber_error: float = 0.0
    n_critical_skipped: int = 0
    counterexample: dict | None = None

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _pt_json(p) -> list[list[float]]:
    return [[float(np.real(v)), float(np.imag(v))] for v in np.ravel(p)]


def deck_invariance_check(m: ProperMapDescriptor | str, g: TransformGroup,
                          samples: SampleBatch | np.ndarray, fiber_tol: float = 1e-10,
                          forward_tol: float = 1e-14) -> DeckReport:
    """Check that ``forward o U = forward`` and that fibers are group orbits.

    The first failing sample (lowest index) is reported.  Samples whose image
    is a critical value are skipped for the fiber test only.
    """
    m = get_map(m)
    pts = samples.points if isinstance(samples, SampleBatch) else np.asarray(samples)
    report = DeckReport(map=m.name.value, group=g.name, n_samples=len(pts), passed=True)
    img = forward(m, pts)
    scale = np.maximum(1.0, np.max(np.abs(img), axis=-1))
    orbit = g.orbit(pts)  # (|G|, n, dim)
    fwd_err = np.max(np.abs(forward(m, orbit) - img[None]), axis=(0, 2)) / scale
    inside = np.all(geometry.is_member(m.source, orbit), axis=0)

    disc = np.abs(discriminant(m, img))
    regular = disc >= EPS_CRIT
    fiber_err = np.zeros(len(pts))
    if np.any(regular):
        inv = local_inverses(m, img[regular])  # (m, r, dim)
        orb = orbit[:, regular]
        # symmetric set distance: every preimage near some orbit point and back
        d = np.max(np.abs(inv[:, None] - orb[None]), axis=-1)  # (m, |G|, r)
        fiber_err[regular] = np.maximum(d.min(axis=1).max(axis=0), d.min(axis=0).max(axis=0))
        if len(g) != m.multiplicity:
            fiber_err[regular] = np.inf
    report.n_critical_skipped = int(np.count_nonzero(~regular))
    report.max_forward_error = float(fwd_err.max(initial=0.0))
    report.max_fiber_error = float(fiber_err.max(initial=0.0))

    for i in range(len(pts)):
        reason = None
        if fwd_err[i] > forward_tol:
            reason = "forward(U p) != forward(p)"
        elif not inside[i]:
            reason = "group element leaves the source domain"
        elif fiber_err[i] > fiber_tol:
            reason = "fiber differs from group orbit"
        if reason:
            report.passed = False
            report.counterexample = {"index": i, "point": _pt_json(pts[i]), "reason": reason}
            break
    return report


@dataclass
class FalsifierWitness:
    k: int
    zeta: complex
    point: tuple[complex, complex, complex]
    norm_before: float
    norm_after: float

    @property
    def gap(self) -> float:
        return abs(self.norm_before - self.norm_after)

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "zeta": [self.zeta.real, self.zeta.imag],
            "point": _pt_json(self.point),
            "norm_before": self.norm_before,
            "norm_after": self.norm_after,
        }


def rotate_offdiag(p, zeta: complex) -> np.ndarray:
    p = np.array(p, dtype=np.complex128)
    p[..., 2] *= zeta
    return p


def phik_isometry_falsifier(k: int, min_gap: float = 0.1, step: float = 0.05,
                            seed: int = 0, budget: int = 100_000) -> FalsifierWitness:
    """Find p in R_II whose norm changes under z -> zeta z, zeta = exp(2 pi i / k).

    Scans the real diagonal (t, t, t) at ``step`` and returns the first member
    with a norm gap above ``min_gap``; falls back to seeded random search.
    """
    if k < 3:
        raise BergmanLabError("falsifier needs k >= 3 (z -> -z preserves the norm)")
    zeta = cmath.exp(2j * math.pi / k)

    def check(p):
        before = opnorm(p)
        after = opnorm(rotate_offdiag(p, zeta))
        if before < 1.0 and abs(before - after) > min_gap:
            return FalsifierWitness(k, zeta, tuple(complex(v) for v in p), before, float(after))
        return None

    for j in range(1, round(1.0 / step)):
        t = round(j * step, 12)
        w = check((t, t, t))
        if w is not None:
            return w
    rng = np.random.default_rng(seed)
    pts = geometry.draw_box(geometry.RII, budget, rng)
    before = opnorm(pts)
    after = opnorm(rotate_offdiag(pts, zeta))
    ok = np.flatnonzero((before < 1.0) & (np.abs(before - after) > min_gap))
    if len(ok):
        return check(pts[ok[0]])
    raise SearchExhausted(f"no norm-changing witness for k={k} within budget {budget}")
