"""Seeded Monte Carlo integration over the bundled domains.

Estimator: draw ``n`` proposals uniformly from the domain's polydisc box,
set the integrand to zero outside the domain and report
``box_volume * mean``.  The indicator and the integrand share one stream, so
a volume and an integral computed together see the same points.

Determinism: proposals are split into ``workers`` contiguous ranges; range
``k`` draws from substream ``k`` of ``SeedSequence(seed)`` in chunks.  Chunk
statistics are merged by a fixed pairwise tree, first within a range, then
across ranges, so the result is a function of ``(seed, n, workers, chunk)``
only.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import geometry, maps, operators
from .errors import NonFinite
from .geometry import DomainDescriptor
from .maps import ProperMapDescriptor
from .operators import ONE, Poly, WeightFunction

SIGMA_RULE = 4.0
DEFAULT_CHUNK = 1 << 18

Integrand = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class MCEstimate:
    value: complex
    stderr: float
    n: int
    seed: int | tuple
    workers: int = 1

    def to_dict(self) -> dict:
        return {"value": [self.value.real, self.value.imag], "stderr": self.stderr,
                "n": self.n, "seed": self.seed, "workers": self.workers}


@dataclass
class CheckResult:
    """One statistical or algebraic comparison with its pass flag."""

    name: str
    value: float | complex
    expected: float | complex
    stderr: float
    threshold: float
    passed: bool
    detail: dict = field(default_factory=dict)

    @property
    def deviation(self) -> float:
        return abs(complex(self.value) - complex(self.expected))

    def to_dict(self) -> dict:
        def enc(v):
            v = complex(v)
            return [v.real, v.imag]

        return {"name": self.name, "value": enc(self.value), "expected": enc(self.expected),
                "deviation": self.deviation, "stderr": self.stderr,
                "threshold": self.threshold, "passed": bool(self.passed),
                "detail": self.detail}


def compare(name: str, value, expected, stderr: float, detail: dict | None = None,
            sigmas: float = SIGMA_RULE) -> CheckResult:
    thr = sigmas * stderr
    dev = abs(complex(value) - complex(expected))
    return CheckResult(name, value, expected, stderr, thr, bool(dev < thr), detail or {})


# ---------------------------------------------------------------------------
# streaming moments


def _merge(a, b):
    """Chan et al. merge of (count, mean, M2) triples; M2 = sum |x - mean|^2."""
    na, ma, qa = a
    nb, mb, qb = b
    n = na + nb
    delta = mb - ma
    mean = ma + delta * (nb / n)
    return n, mean, qa + qb + (delta.real**2 + delta.imag**2) * (na * nb / n)


def _tree(items: list):
    while len(items) > 1:
        nxt = [_merge(items[i], items[i + 1]) for i in range(0, len(items) - 1, 2)]
        if len(items) % 2:
            nxt.append(items[-1])
        items = nxt
    return items[0]


def _chunk_stats(d: DomainDescriptor, fs: Sequence[Integrand | None], size: int,
                 rng: np.random.Generator):
    box = geometry.draw_box(d, size, rng)
    inside = geometry.is_member(d, box)
    pts = box[inside]
    out = []
    for f in fs:
        vals = np.ones(len(pts)) if f is None else np.asarray(f(pts))
        if vals.shape != (len(pts),):
            vals = np.broadcast_to(vals, (len(pts),))
        if not np.all(np.isfinite(vals)):
            raise NonFinite("integrand produced a non-finite value")
        mean = vals.sum() / size
        dev = vals - mean
        m2 = float(np.sum(dev.real**2 + dev.imag**2)) + (size - len(pts)) * abs(mean) ** 2
        out.append((size, complex(mean), m2))
    return out


def _range_stats(d, fs, count, rng, chunk):
    per_f = [[] for _ in fs]
    left = count
    while left > 0:
        size = min(chunk, left)
        for acc, st in zip(per_f, _chunk_stats(d, fs, size, rng)):
            acc.append(st)
        left -= size
    return [_tree(acc) for acc in per_f]


def mc_integrate_many(d: DomainDescriptor | str, fs: Sequence[Integrand | None], n: int,
                      seed=0, workers: int = 1, chunk: int = DEFAULT_CHUNK) -> list[MCEstimate]:
    """Integrals of several integrands over ``d`` on one shared sample stream.

    ``None`` stands for the constant 1 (so the estimate is Vol(d)).
    """
    d = geometry.get_domain(d)
    workers = max(1, min(int(workers), n))
    counts = [n // workers + (1 if k < n % workers else 0) for k in range(workers)]
    rngs = geometry.substreams(seed, workers)
    jobs = list(zip(counts, rngs))
    if workers == 1:
        results = [_range_stats(d, fs, c, r, chunk) for c, r in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(lambda job: _range_stats(d, fs, job[0], job[1], chunk), jobs))
    vol = d.box_volume
    out = []
    for i in range(len(fs)):
        cnt, mean, m2 = _tree([res[i] for res in results])
        var = m2 / (cnt - 1) if cnt > 1 else 0.0
        out.append(MCEstimate(value=complex(vol * mean), stderr=vol * math.sqrt(var / cnt),
                              n=cnt, seed=seed, workers=workers))
    return out


def mc_integrate(d: DomainDescriptor | str, f: Integrand | None, n: int, seed=0,
                 workers: int = 1, chunk: int = DEFAULT_CHUNK) -> MCEstimate:
    """Estimate the integral of ``f`` over ``d`` with ``n`` box proposals."""
    return mc_integrate_many(d, [f], n, seed, workers, chunk)[0]


def _as_fn(f) -> Integrand:
    if isinstance(f, Poly):
        return f.eval
    return f


def inner_product_integrand(f, g, w: WeightFunction = ONE) -> Integrand:
    f, g = _as_fn(f), _as_fn(g)
    return lambda p: f(p) * np.conj(g(p)) * w(p)


def inner_product(d: DomainDescriptor | str, f, g, w: WeightFunction = ONE, n: int = 10**6,
                  seed=0, workers: int = 1) -> MCEstimate:
    """Weighted L2 inner product: integral of f conj(g) w."""
    return mc_integrate(d, inner_product_integrand(f, g, w), n, seed, workers)


# ---------------------------------------------------------------------------
# checks


def _sub_seed(seed, tag: int):
    base = list(seed) if isinstance(seed, (tuple, list)) else [int(seed)]
    return tuple(base + [tag])


def change_of_variables_check(m: ProperMapDescriptor | str, f: Integrand, w: WeightFunction = ONE,
                              n: int = 10**6, seed=0, workers: int = 1,
                              name: str = "eq1") -> CheckResult:
    """m * int_G f w dV  vs  int_D (f o pi) |J pi|^2 (w o pi) dV on independent streams."""
    m = maps.get_map(m)
    f = _as_fn(f)
    lhs = mc_integrate(m.target, lambda x: f(x) * w(x), n, _sub_seed(seed, 0), workers)

    def rhs_integrand(z):
        x = maps.forward(m, z)
        return f(x) * np.abs(maps.jacobian(m, z)) ** 2 * w(x)

    rhs = mc_integrate(m.source, rhs_integrand, n, _sub_seed(seed, 1), workers)
    se = math.hypot(m.multiplicity * lhs.stderr, rhs.stderr)
    return compare(name, m.multiplicity * lhs.value, rhs.value, se,
                   {"map": m.name.value, "weight": w.name, "n": n,
                    "lhs": [lhs.value.real * m.multiplicity, lhs.value.imag * m.multiplicity],
                    "rhs": [rhs.value.real, rhs.value.imag]})


def reproducing_check(K, f: Poly, z, n: int = 10**6, seed=0, workers: int = 1,
                      V=None, name: str = "reproducing") -> CheckResult:
    """<f, K(., z)> = int f(w) K(z, w) dV(w) against f(z).

    When ``V`` (the volume constant inside ``K``) is given, its relative
    standard error is propagated into the combined standard error, since the
    estimate scales as 1/V.
    """
    z = np.asarray(z, dtype=np.complex128)
    if not geometry.is_member(K.domain, z):
        from .errors import NonMember

        raise NonMember("reproducing_check needs an interior point")
    fz = complex(f.eval(z))
    est = mc_integrate(K.domain, lambda w: f.eval(w) * K(z, w), n, seed, workers)
    se = est.stderr
    if V is not None and V.stderr:
        se = math.hypot(se, abs(est.value) * V.stderr / V.value)
    return compare(name, est.value, fz, se,
                   {"domain": K.domain.name.value, "point": geometry_json(z), "n": n,
                    "mc_stderr": est.stderr})


def isometry_check(m: ProperMapDescriptor | str, f: Poly, w: WeightFunction = ONE,
                   n: int = 10**6, seed=0, workers: int = 1,
                   name: str = "isometry") -> CheckResult:
    """||Gamma f||^2 on the source (weight w o pi) vs ||f||^2 on the target (weight w)."""
    m = maps.get_map(m)
    gf = operators.gamma_apply(f, m)
    src = mc_integrate(m.source, lambda z: np.abs(gf.eval(z)) ** 2 * w(maps.forward(m, z)),
                       n, _sub_seed(seed, 0), workers)
    tgt = mc_integrate(m.target, lambda x: np.abs(f.eval(x)) ** 2 * w(x),
                       n, _sub_seed(seed, 1), workers)
    return compare(name, src.value, tgt.value, math.hypot(src.stderr, tgt.stderr),
                   {"map": m.name.value, "weight": w.name, "poly": f.to_json()})


def contraction_check(m: ProperMapDescriptor | str, g: Poly, w: WeightFunction = ONE,
                      n: int = 10**6, seed=0, workers: int = 1,
                      name: str = "contraction") -> CheckResult:
    """||P g||^2 <= ||g||^2 + 4 sigma, both on one stream over the source."""
    m = maps.get_map(m)
    pg = operators.project_generic(g, m)
    wsrc = lambda z: w(maps.forward(m, z))
    est_p, est_g = mc_integrate_many(
        m.source, [lambda z: np.abs(pg.eval(z)) ** 2 * wsrc(z),
                   lambda z: np.abs(g.eval(z)) ** 2 * wsrc(z)], n, seed, workers)
    se = math.hypot(est_p.stderr, est_g.stderr)
    excess = est_p.value.real - est_g.value.real
    return CheckResult(name, est_p.value.real, est_g.value.real, se, SIGMA_RULE * se,
                       bool(excess <= SIGMA_RULE * se), {"map": m.name.value})


def geometry_json(p) -> list[list[float]]:
    return [[float(v.real), float(v.imag)] for v in np.ravel(np.asarray(p, dtype=complex))]
