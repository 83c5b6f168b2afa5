"""Sparse complex polynomials and the Gamma / Gamma* / projection operators.

For a proper map ``pi`` of multiplicity ``m`` with Jacobian ``J``::

    Gamma f   = (f o pi) J / sqrt(m)
    Gamma* g  = sqrt(m) h,   where h o pi = g / J
    P g       = (1/m) sum_U (g o U) det U      (U over the deck group)

All three act on :class:`Poly`, so every identity between them can be
checked coefficient by coefficient.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass

import numpy as np

from . import maps
from .errors import BergmanLabError, NotInRange
from .maps import MapName, ProperMapDescriptor

Exponent = tuple[int, ...]
COEF_TOL = 1e-12


class Poly:
    """Immutable sparse polynomial ``{exponent tuple: complex coefficient}``.

    Zero coefficients are never stored.  ``==`` is exact; use
    :meth:`allclose` for checks that must absorb rounding of sqrt(2) etc.
    """

    __slots__ = ("_terms", "nvars")

    def __init__(self, terms: Mapping[Exponent, complex] | None = None, nvars: int = 3):
        clean: dict[Exponent, complex] = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != nvars or min(exp, default=0) < 0:
                raise BergmanLabError(f"bad exponent {exp} for {nvars} variables")
            c = complex(c)
            if c != 0:
                clean[exp] = clean.get(exp, 0) + c
                if clean[exp] == 0:
                    del clean[exp]
        self._terms = clean
        self.nvars = nvars

    # construction -----------------------------------------------------
    @classmethod
    def const(cls, c: complex, nvars: int = 3) -> Poly:
        return cls({(0,) * nvars: c}, nvars)

    @classmethod
    def var(cls, i: int, nvars: int = 3) -> Poly:
        exp = [0] * nvars
        exp[i] = 1
        return cls({tuple(exp): 1.0}, nvars)

    @classmethod
    def monomial(cls, exp: Iterable[int], coef: complex = 1.0) -> Poly:
        exp = tuple(exp)
        return cls({exp: coef}, len(exp))

    @classmethod
    def gens(cls, nvars: int = 3) -> tuple[Poly, ...]:
        return tuple(cls.var(i, nvars) for i in range(nvars))

    # access -----------------------------------------------------------
    @property
    def terms(self) -> dict[Exponent, complex]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def coefficient(self, exp: Iterable[int]) -> complex:
        return self._terms.get(tuple(exp), 0j)

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def __repr__(self) -> str:
        if not self._terms:
            return "Poly(0)"
        parts = [f"({c:.6g})*{e}" for e, c in sorted(self._terms.items())]
        return "Poly(" + " + ".join(parts) + ")"

    # arithmetic -------------------------------------------------------
    def _coerce(self, other) -> Poly:
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise BergmanLabError("polynomials live in different numbers of variables")
            return other
        return Poly.const(other, self.nvars)

    def __add__(self, other) -> Poly:
        other = self._coerce(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return Poly(out, self.nvars)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly({e: -c for e, c in self._terms.items()}, self.nvars)

    def __sub__(self, other) -> Poly:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> Poly:
        return self._coerce(other) - self

    def __mul__(self, other) -> Poly:
        if not isinstance(other, Poly):
            c = complex(other)
            return Poly({e: c * v for e, v in self._terms.items()}, self.nvars)
        other = self._coerce(other)
        out: dict[Exponent, complex] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Poly(out, self.nvars)

    __rmul__ = __mul__

    def __truediv__(self, c) -> Poly:
        return self * (1.0 / complex(c))

    def __pow__(self, k: int) -> Poly:
        if k < 0:
            raise BergmanLabError("negative powers are not polynomials")
        out, base = Poly.const(1.0, self.nvars), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            other = Poly.const(other, self.nvars)
        return self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self._terms.items())))

    def allclose(self, other, tol: float = COEF_TOL) -> bool:
        diff = self - self._coerce(other)
        return all(abs(c) <= tol for c in diff._terms.values())

    def chop(self, tol: float = COEF_TOL) -> Poly:
        return Poly({e: c for e, c in self._terms.items() if abs(c) > tol}, self.nvars)

    def conj_coeffs(self) -> Poly:
        return Poly({e: c.conjugate() for e, c in self._terms.items()}, self.nvars)

    # composition and evaluation ----------------------------------------
    def compose(self, subs: Iterable[Poly]) -> Poly:
        """Substitute polynomial ``subs[i]`` for variable ``i``."""
        subs = list(subs)
        if len(subs) != self.nvars:
            raise BergmanLabError("compose needs one polynomial per variable")
        nv = subs[0].nvars
        cache: dict[tuple[int, int], Poly] = {}

        def power(i: int, k: int) -> Poly:
            if (i, k) not in cache:
                cache[(i, k)] = subs[i] ** k
            return cache[(i, k)]

        out = Poly(nvars=nv)
        for exp, c in self._terms.items():
            term = Poly.const(c, nv)
            for i, k in enumerate(exp):
                if k:
                    term = term * power(i, k)
            out = out + term
        return out

    def linear_substitute(self, mat: np.ndarray) -> Poly:
        """``p(U z)`` for a square matrix ``U``."""
        gens = Poly.gens(self.nvars)
        rows = [sum((complex(mat[i, j]) * gens[j] for j in range(self.nvars)
                     if mat[i, j] != 0), Poly(nvars=self.nvars))
                for i in range(self.nvars)]
        return self.compose(rows)

    def __call__(self, points) -> complex | np.ndarray:
        return self.eval(points)

    def eval(self, points) -> complex | np.ndarray:
        """Evaluate at ``points`` of shape (..., nvars)."""
        pts = np.asarray(points, dtype=np.complex128)
        if pts.shape[-1:] != (self.nvars,):
            raise BergmanLabError(f"expected {self.nvars} coordinates, got shape {pts.shape}")
        out = np.zeros(pts.shape[:-1], dtype=np.complex128)
        if not self._terms:
            return complex(out) if out.ndim == 0 else out
        maxdeg = [max(e[i] for e in self._terms) for i in range(self.nvars)]
        pows = []
        for i in range(self.nvars):
            col = [np.ones(pts.shape[:-1], dtype=np.complex128)]
            for _ in range(maxdeg[i]):
                col.append(col[-1] * pts[..., i])
            pows.append(col)
        for exp, c in sorted(self._terms.items()):
            term = np.full(pts.shape[:-1], c, dtype=np.complex128)
            for i, k in enumerate(exp):
                if k:
                    term = term * pows[i][k]
            out = out + term
        return complex(out) if out.ndim == 0 else out

    # division -----------------------------------------------------------
    def divmod(self, divisor: Poly) -> tuple[Poly, Poly]:
        """Division by a single polynomial in lex order.

        A single divisor is a Groebner basis of its ideal, so the remainder
        vanishes exactly when ``divisor`` divides ``self``.
        """
        divisor = self._coerce(divisor)
        if not divisor:
            raise ZeroDivisionError("division by the zero polynomial")
        lead = max(divisor._terms)
        lc = divisor._terms[lead]
        p = dict(self._terms)
        q: dict[Exponent, complex] = {}
        r: dict[Exponent, complex] = {}
        while p:
            e = max(p)
            c = p.pop(e)
            if all(a >= b for a, b in zip(e, lead)):
                shift = tuple(a - b for a, b in zip(e, lead))
                t = c / lc
                q[shift] = q.get(shift, 0) + t
                for de, dc in divisor._terms.items():
                    if de == lead:
                        continue
                    ne = tuple(a + b for a, b in zip(shift, de))
                    p[ne] = p.get(ne, 0) - t * dc
                    if p[ne] == 0:
                        del p[ne]
            else:
                r[e] = r.get(e, 0) + c
        return Poly(q, self.nvars), Poly(r, self.nvars)

    # serialisation --------------------------------------------------------
    def to_json(self) -> list[dict]:
        return [{"exp": list(e), "coef": [c.real, c.imag]}
                for e, c in sorted(self._terms.items())]

    @classmethod
    def from_json(cls, data, nvars: int | None = None) -> Poly:
        terms: dict[Exponent, complex] = {}
        for item in data:
            exp = tuple(int(v) for v in item["exp"])
            coef = item["coef"]
            c = complex(coef[0], coef[1]) if isinstance(coef, (list, tuple)) else complex(coef)
            terms[exp] = terms.get(exp, 0) + c
            nvars = nvars or len(exp)
        return cls(terms, nvars or 3)


def monomials(nvars: int, max_degree: int) -> list[Poly]:
    """All monic monomials of total degree <= ``max_degree``."""
    out = []

    def rec(prefix, left, slots):
        if slots == 1:
            for k in range(left + 1):
                out.append(Poly.monomial(prefix + (k,)))
            return
        for k in range(left + 1):
            rec(prefix + (k,), left - k, slots - 1)

    rec((), max_degree, nvars)
    return out


# ---------------------------------------------------------------------------
# weights


@dataclass(frozen=True)
class WeightFunction:
    name: str
    evaluator: Callable[[np.ndarray], np.ndarray]

    def __call__(self, points) -> np.ndarray:
        return self.evaluator(np.asarray(points))


ONE = WeightFunction("One", lambda p: np.ones(p.shape[:-1]))
ONE_PLUS_ABS_X1_SQ = WeightFunction("OnePlusAbsX1Sq", lambda p: 1.0 + np.abs(p[..., 0]) ** 2)
WEIGHTS = {"one": ONE, "oneplusabsx1sq": ONE_PLUS_ABS_X1_SQ}


def custom_weight(fn: Callable[[np.ndarray], np.ndarray], name: str = "Custom") -> WeightFunction:
    return WeightFunction(name, fn)


# ---------------------------------------------------------------------------
# maps as polynomials


def forward_polys(m: ProperMapDescriptor | str) -> list[Poly]:
    m = maps.get_map(m)
    if m.name is MapName.TETRA:
        z11, z22, z = Poly.gens(3)
        return [z11, z22, z11 * z22 - z * z]
    z1, z2 = Poly.gens(2)
    return [z1 + z2, z1 * z2]


def jacobian_poly(m: ProperMapDescriptor | str) -> Poly:
    m = maps.get_map(m)
    if m.name is MapName.TETRA:
        return -2.0 * Poly.var(2, 3)
    z1, z2 = Poly.gens(2)
    return z1 - z2


def _is_invariant(q: Poly, m: ProperMapDescriptor, tol: float) -> bool:
    return all(q.linear_substitute(u).allclose(q, tol) for u in m.deck_group.elements)


def _invariant_to_target(q: Poly, m: ProperMapDescriptor, tol: float) -> Poly:
    """The polynomial h on the target with h o pi = q, for deck-invariant q."""
    if m.name is MapName.TETRA:
        x1, x2, x3 = Poly.gens(3)
        s2 = x1 * x2 - x3
        out = Poly(nvars=3)
        for (a, b, c), coef in q.items():
            if c % 2:
                continue  # odd part is ~0 once invariance has been checked
            out = out + coef * x1**a * x2**b * s2 ** (c // 2)
        return out
    # symmetric reduction in terms of e1 = z1 + z2, e2 = z1 z2
    z1, z2 = Poly.gens(2)
    e1, e2 = z1 + z2, z1 * z2
    p = q.chop(0.0)
    out: dict[Exponent, complex] = {}
    while p:
        (a, b), c = max(p.items())
        if abs(c) <= tol:
            p = Poly({e: v for e, v in p.items() if e != (a, b)}, 2)
            continue
        if a < b:
            raise NotInRange("quotient is not symmetric")
        out[(a - b, b)] = out.get((a - b, b), 0) + c
        p = p - c * e1 ** (a - b) * e2**b
        p = Poly({e: v for e, v in p.items() if e != (a, b)}, 2)
    return Poly(out, 2)


def gamma_apply(f: Poly, m: ProperMapDescriptor | str) -> Poly:
    """Gamma f = (f o pi) J pi / sqrt(m), a polynomial on the source."""
    m = maps.get_map(m)
    return f.compose(forward_polys(m)) * jacobian_poly(m) / math.sqrt(m.multiplicity)


def gamma_star_apply(g: Poly, m: ProperMapDescriptor | str, tol: float = COEF_TOL) -> Poly:
    """Gamma* g = sqrt(m) h with h o pi = g / J pi.

    Raises :class:`NotInRange` when ``g / J pi`` leaves a remainder or is not
    invariant under the deck group.
    """
    m = maps.get_map(m)
    quot, rem = g.divmod(jacobian_poly(m))
    if not rem.allclose(0, tol):
        raise NotInRange(f"{m.name.value}: g is not divisible by the Jacobian")
    if not _is_invariant(quot, m, tol):
        raise NotInRange(f"{m.name.value}: g / J is not deck-invariant")
    h = _invariant_to_target(quot, m, tol)
    if not h.compose(forward_polys(m)).allclose(quot, tol * max(1.0, len(quot))):
        raise NotInRange(f"{m.name.value}: invariant rewrite failed")  # pragma: no cover
    return (h * math.sqrt(m.multiplicity)).chop(0.0)


def project_generic(g: Poly, m: ProperMapDescriptor | str) -> Poly:
    """(1/m) sum over deck transformations U of (g o U) det U."""
    m = maps.get_map(m)
    total = Poly(nvars=g.nvars)
    for u in m.deck_group.elements:
        total = total + g.linear_substitute(u) * complex(np.linalg.det(u))
    return total / m.multiplicity


def project_tetra(g: Poly) -> Poly:
    """Odd part in the off-diagonal variable: (g(z11, z22, z) - g(z11, z22, -z)) / 2."""
    return Poly({e: c for e, c in g.items() if e[2] % 2 == 1}, g.nvars)


def taylor_coefficient(g: Poly, exponents: Iterable[int]) -> complex:
    return g.coefficient(exponents)


def in_tetra_range(g: Poly, tol: float = 0.0) -> bool:
    """Every coefficient at z11^k z22^l z^(2n) vanishes."""
    return all(abs(c) <= tol for e, c in g.items() if e[2] % 2 == 0)
