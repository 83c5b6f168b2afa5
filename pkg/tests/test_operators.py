from __future__ import annotations

import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bergman_lab import maps
from bergman_lab import operators as op
from bergman_lab.errors import BergmanLabError, NotInRange
from bergman_lab.operators import Poly

coef = st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False).map(
    lambda c: complex(round(c.real, 3), round(c.imag, 3)))


def polys(nvars=3, max_deg=3, max_terms=5):
    exps = st.tuples(*[st.integers(0, max_deg)] * nvars)
    return st.dictionaries(exps, coef, max_size=max_terms).map(lambda d: Poly(d, nvars))


pts3 = st.lists(st.complex_numbers(max_magnitude=1, allow_nan=False), min_size=3, max_size=3)


@given(polys(), polys(), polys())
def test_ring_laws(p, q, r):
    assert (p + q).allclose(q + p)
    assert (p * q).allclose(q * p)
    assert (p * (q + r)).allclose(p * q + p * r, 1e-9)
    assert (p - p) == Poly(nvars=3)


@given(polys(), polys(), pts3)
def test_eval_is_a_homomorphism(p, q, z):
    z = np.array(z)
    assert (p * q)(z) == pytest.approx(p(z) * q(z), rel=1e-9, abs=1e-9)
    assert (p + q)(z) == pytest.approx(p(z) + q(z), rel=1e-9, abs=1e-9)


@given(polys(), polys(max_terms=3))
def test_division_identity(p, d):
    if not d:
        return
    q, r = p.divmod(d)
    assert (q * d + r).allclose(p, 1e-6)


@given(polys())
def test_json_round_trip(p):
    data = json.loads(json.dumps(p.to_json()))
    assert Poly.from_json(data, 3) == p


def test_compose_and_powers():
    x1, x2, x3 = Poly.gens()
    p = x1 * x2 - x3
    z11, z22, z = Poly.gens()
    assert p.compose([z11, z22, z11 * z22 - z**2]) == z**2
    assert (x1 + 1) ** 2 == x1 * x1 + 2 * x1 + 1
    assert Poly.monomial((1, 2, 0)).degree == 3


def test_bad_exponents():
    with pytest.raises(BergmanLabError):
        Poly({(1, 0): 1.0}, 3)


def test_vectorised_eval():
    p = Poly.monomial((1, 0, 2), 2.0)
    pts = np.array([[1, 0, 1], [2, 5, 1j]])
    np.testing.assert_allclose(p(pts), [2, -4])


@pytest.mark.parametrize("m", [maps.TETRA_MAP, maps.SYM2_MAP])
def test_gamma_star_inverts_gamma(m):
    for f in op.monomials(m.target.dimension, 4):
        g = op.gamma_apply(f, m)
        assert op.gamma_star_apply(g, m).allclose(f, 1e-12)


@pytest.mark.parametrize("m", [maps.TETRA_MAP, maps.SYM2_MAP])
def test_projection_laws(m):
    for g in op.monomials(m.source.dimension, 5):
        pg = op.project_generic(g, m)
        assert op.project_generic(pg, m).allclose(pg, 1e-12)
    for f in op.monomials(m.target.dimension, 3):
        gf = op.gamma_apply(f, m)
        assert op.project_generic(gf, m).allclose(gf, 1e-12)


def test_project_tetra_matches_generic_and_parity():
    for g in op.monomials(3, 6):
        assert op.project_tetra(g).allclose(op.project_generic(g, "tetra"), 1e-15)
        odd = next(iter(g.terms))[2] % 2 == 1
        assert op.in_tetra_range(g) == odd


def test_gamma_star_rejects_non_range():
    z11, _z22, z = Poly.gens()
    with pytest.raises(NotInRange):
        op.gamma_star_apply(z11, "tetra")  # not divisible by J = -2z
    with pytest.raises(NotInRange):
        op.gamma_star_apply(z * z * z11, "tetra")  # z11 z: not even in z
    z1, z2 = Poly.gens(2)
    with pytest.raises(NotInRange):
        op.gamma_star_apply((z1 - z2) * z1, "sym2")  # quotient not symmetric


def test_gamma_values():
    # Gamma(1) on the tetra map is J / sqrt(2) = -sqrt(2) z
    g = op.gamma_apply(Poly.const(1.0), "tetra")
    assert g.allclose(Poly.monomial((0, 0, 1), -np.sqrt(2)))
    assert op.taylor_coefficient(g, (0, 0, 1)) == pytest.approx(-np.sqrt(2))


def test_weights():
    p = np.array([[0.5, 0, 0], [0, 0, 0]])
    np.testing.assert_allclose(op.ONE_PLUS_ABS_X1_SQ(p), [1.25, 1.0])
    np.testing.assert_allclose(op.ONE(p), [1.0, 1.0])
    w = op.custom_weight(lambda q: 2 + np.abs(q[..., 0]))
    assert w(p)[0] == pytest.approx(2.5)
