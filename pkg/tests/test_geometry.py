from __future__ import annotations

import cmath
import math

import numpy as np
import pytest
from conftest import cplx, points
from hypothesis import assume, given
from hypothesis import strategies as st

from bergman_lab import geometry as g
from bergman_lab.errors import BergmanLabError


def eig_norm(p) -> float:
    """Oracle: largest singular value from LAPACK."""
    return float(np.linalg.norm(g.SymPoint(*p).matrix(), 2))


@given(points(3, 1.2))
def test_opnorm_matches_svd(p):
    assert g.opnorm(p) == pytest.approx(eig_norm(p), rel=1e-10, abs=1e-12)


@given(points(3, 1.0), cplx(2.0))
def test_opnorm_homogeneous(p, lam):
    assert g.opnorm(lam * p) == pytest.approx(abs(lam) * g.opnorm(p), rel=1e-10, abs=1e-12)


@given(points(3, 1.0))
def test_opnorm_sign_and_transpose_symmetry(p):
    q = p.copy()
    q[2] = -q[2]
    assert g.opnorm(q) == pytest.approx(g.opnorm(p), rel=1e-12, abs=1e-14)
    assert g.opnorm(p[[1, 0, 2]]) == pytest.approx(g.opnorm(p), rel=1e-12, abs=1e-14)


@given(points(3, 1.0))
def test_opnorm_dominates_entries(p):
    assert g.opnorm(p) >= max(abs(v) for v in p) - 1e-12


@given(points(3, 1.0), st.floats(0, 1))
def test_rii_star_shaped(p, t):
    if g.is_member(g.RII, p):
        assert g.is_member(g.RII, t * p)


@given(points(3, 1.0), st.floats(0, 1))
def test_tetrablock_star_shaped_via_lift(x, t):
    if g.is_member(g.TETRABLOCK, x):
        # t * lift maps to (t x1, t x2, t^2 x3)
        assert g.is_member(g.TETRABLOCK, np.array([t * x[0], t * x[1], t * t * x[2]]))


@given(points(3, 1.0))
def test_tetrablock_membership_matches_lift(x):
    via_lift = g.opnorm(g.tetra_lift(x))
    assume(abs(via_lift - 1.0) > 1e-9)
    assert g.is_member(g.TETRABLOCK, x) == g.is_member_tetra_via_lift(x)


@given(points(2, 1.2))
def test_symbidisc_membership_matches_roots(z):
    assume(all(abs(abs(v) - 1) > 1e-9 for v in z))
    x = np.array([z[0] + z[1], z[0] * z[1]])
    assert g.is_member(g.SYMBIDISC, x) == bool(np.all(np.abs(z) < 1))


def test_quadratic_roots_against_numpy(rng):
    b = rng.standard_normal(200) + 1j * rng.standard_normal(200)
    c = rng.standard_normal(200) + 1j * rng.standard_normal(200)
    r1, r2 = g.quadratic_roots(b, c)
    for k in range(200):
        got = sorted([r1[k], r2[k]], key=lambda v: (v.real, v.imag))
        want = sorted(np.roots([1, -b[k], c[k]]), key=lambda v: (v.real, v.imag))
        np.testing.assert_allclose(got, want, rtol=1e-9, atol=1e-12)
    assert np.all(r1.imag >= r2.imag)


def test_boundary_is_excluded():
    assert not g.is_member(g.RII, (1.0, 0, 0))
    assert not g.is_member(g.TETRABLOCK, (0, 0, -1.0))
    assert not g.is_member(g.DISC, 1.0)
    assert g.is_member(g.DISC, 0.999)
    assert g.is_member(g.SYMBIDISC, (0, 0))


def test_shapes_and_errors():
    pts = np.zeros((4, 2, 3), complex)
    assert g.is_member(g.RII, pts).shape == (4, 2)
    assert g.is_member("rii", (0.1, 0.1, 0.1)) is True
    with pytest.raises(BergmanLabError):
        g.is_member(g.RII, (0.1, 0.2))
    with pytest.raises(BergmanLabError):
        g.get_domain("square")
    with pytest.raises(BergmanLabError):
        g.opnorm((0.1, 0.2))


def test_named_points():
    p = g.SymPoint(0.1, 0.2, 0.3j)
    assert g.opnorm(p) == pytest.approx(eig_norm(p))
    assert g.is_member(g.TETRABLOCK, g.TetraPoint(0.1, 0.1, 0.0))


def test_box_volumes():
    assert g.RII.box_volume == pytest.approx(math.pi ** 3)
    assert g.SYMBIDISC.box_volume == pytest.approx(4 * math.pi ** 2)
    assert g.polydisc(5).box_volume == pytest.approx(math.pi ** 5)


def test_symbidisc_box_covers_domain(rng):
    z = g.sample_uniform(g.BIDISC, 20_000, 3).points
    x = np.stack([z[:, 0] + z[:, 1], z[:, 0] * z[:, 1]], axis=-1)
    assert np.all(np.abs(x) < np.asarray(g.SYMBIDISC.radii))


@pytest.mark.parametrize("d", [g.RII, g.TETRABLOCK, g.SYMBIDISC, g.DISC])
def test_samples_are_members_and_deterministic(d):
    a = g.sample_uniform(d, 3000, seed=11, workers=3)
    b = g.sample_uniform(d, 3000, seed=11, workers=3)
    c = g.sample_uniform(d, 3000, seed=12, workers=3)
    assert a.points.shape == (3000, d.dimension)
    assert np.all(g.is_member(d, a.points))
    np.testing.assert_array_equal(a.points, b.points)
    assert not np.array_equal(a.points, c.points)
    assert 0 < a.acceptance_rate <= 1


def test_sampling_is_uniform_on_disc():
    # E|z|^2 = 1/2 on the unit disc; mean is 0
    z = g.sample_uniform(g.DISC, 200_000, seed=1).points[:, 0]
    assert abs(np.mean(np.abs(z) ** 2) - 0.5) < 4 * np.std(np.abs(z) ** 2) / math.sqrt(len(z))
    assert abs(np.mean(z)) < 4 * 0.5 / math.sqrt(len(z)) * math.sqrt(2)


def test_acceptance_rate_estimates_volume_ratio():
    # tetrablock volume is a third of R_II's (2:1 map with |J|^2 averaging 4|z|^2)
    r = g.sample_uniform(g.RII, 100_000, seed=5).acceptance_rate
    t = g.sample_uniform(g.TETRABLOCK, 100_000, seed=5).acceptance_rate
    assert t / r == pytest.approx(1 / 3, rel=0.03)


def test_tuple_seed_and_bad_n():
    a = g.sample_uniform(g.RII, 10, seed=(1, 2))
    assert a.seed == (1, 2)
    with pytest.raises(BergmanLabError):
        g.sample_uniform(g.RII, 0)


def test_principal_lift():
    x = np.array([0.2, 0.3, 0.5])
    s = g.tetra_lift(x)[2]
    assert s == pytest.approx(cmath.sqrt(0.06 - 0.5))
    assert s.real >= 0


@given(cplx(1.5), cplx(1.5))
def test_opnorm_diagonal_is_exact(a, b):
    # equal singular values are where the naive discriminant cancels;
    # the absolute floor is where squared magnitudes underflow
    assert g.opnorm((a, b, 0)) == pytest.approx(max(abs(a), abs(b)), rel=1e-14, abs=1e-154)
