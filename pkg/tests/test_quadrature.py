from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bergman_lab import geometry as g
from bergman_lab import kernels, maps
from bergman_lab import quadrature as q
from bergman_lab.errors import NonFinite, NonMember
from bergman_lab.operators import ONE, ONE_PLUS_ABS_X1_SQ, Poly


@given(st.lists(st.floats(-100, 100), min_size=2, max_size=200), st.integers(1, 7))
def test_chan_merge_matches_numpy(xs, parts):
    x = np.array(xs)
    chunks = [c for c in np.array_split(x, parts) if len(c)]
    stats = [(len(c), complex(c.mean()), float(np.sum((c - c.mean()) ** 2))) for c in chunks]
    n, mean, m2 = q._tree(stats)
    assert n == len(x)
    assert mean.real == pytest.approx(x.mean(), abs=1e-9)
    assert m2 == pytest.approx(np.sum((x - x.mean()) ** 2), rel=1e-9, abs=1e-7)


def test_disc_moments():
    est = q.mc_integrate(g.DISC, None, 200_000, seed=1)
    assert abs(est.value - math.pi) < 4 * est.stderr + 1e-12
    est = q.mc_integrate(g.DISC, lambda p: np.abs(p[:, 0]) ** 2, 200_000, seed=2)
    assert abs(est.value - math.pi / 2) < 4 * est.stderr


@pytest.mark.parametrize("a", [0, 1, 3])
def test_inner_product_of_monomials_on_disc(a):
    z = Poly({(a,): 1.0}, 1)
    est = q.inner_product(g.DISC, z, z, n=200_000, seed=a)
    # a = 0 integrates 1 over its own box: zero variance, exact up to rounding
    assert abs(est.value - math.pi / (a + 1)) < 4 * est.stderr + 1e-12


def test_orthogonality_on_disc():
    z0, z1 = Poly({(0,): 1.0}, 1), Poly({(1,): 1.0}, 1)
    est = q.inner_product(g.DISC, z0, z1, n=200_000, seed=5)
    assert abs(est.value) < 4 * est.stderr * math.sqrt(2)


def test_determinism_per_seed_and_workers():
    f = lambda p: np.abs(p[:, 2]) ** 2
    a = q.mc_integrate(g.RII, f, 50_000, seed=3, workers=2, chunk=4096)
    b = q.mc_integrate(g.RII, f, 50_000, seed=3, workers=2, chunk=4096)
    c = q.mc_integrate(g.RII, f, 50_000, seed=3, workers=1, chunk=4096)
    assert a.value == b.value and a.stderr == b.stderr
    assert abs(a.value - c.value) < 4 * math.hypot(a.stderr, c.stderr)


def test_shared_stream_estimates():
    ests = q.mc_integrate_many(g.RII, [None, lambda p: np.ones(len(p))], 20_000, seed=1)
    assert ests[0].value == ests[1].value


def test_non_finite_integrand():
    with pytest.raises(NonFinite):
        q.mc_integrate(g.DISC, lambda p: np.full(len(p), np.nan), 1000)


def test_compare():
    c = q.compare("x", 1.0, 1.1, 0.05)
    assert c.passed and c.threshold == pytest.approx(0.2)
    c = q.compare("x", 1.0, 1.3, 0.05)
    assert not c.passed and c.deviation == pytest.approx(0.3)
    assert c.to_dict()["value"] == [1.0, 0.0]


@pytest.mark.parametrize("m", [maps.TETRA_MAP, maps.SYM2_MAP])
@pytest.mark.parametrize("w", [ONE, ONE_PLUS_ABS_X1_SQ])
def test_change_of_variables(m, w):
    chk = q.change_of_variables_check(m, lambda x: np.abs(x[:, 0]) ** 2, w, n=100_000, seed=4)
    assert chk.passed, chk.to_dict()


def test_change_of_variables_detects_wrong_multiplicity():
    wrong = maps.ProperMapDescriptor(maps.MapName.TETRA, g.RII, g.TETRABLOCK, 1,
                                     maps.tetra_deck_group())
    chk = q.change_of_variables_check(wrong, lambda x: np.ones(len(x)), n=200_000, seed=4)
    assert not chk.passed


def test_reproducing_disc_kernel():
    z = np.array([0.3 - 0.2j])
    f = Poly({(2,): 1.0, (0,): 0.5}, 1)
    chk = q.reproducing_check(kernels.disc_kernel(), f, z, n=200_000, seed=1)
    assert chk.passed, chk.to_dict()
    with pytest.raises(NonMember):
        q.reproducing_check(kernels.disc_kernel(), f, np.array([1.0]), n=1000)


def test_reproducing_fails_with_wrong_volume():
    z = np.array([0.1, 0.2, 0.05])
    K = kernels.tetrablock_kernel(kernels.VolumeConstant(1.0))
    chk = q.reproducing_check(K, Poly.const(1.0), z, n=100_000, seed=2)
    assert not chk.passed


def test_isometry_and_contraction():
    x1, _x2, x3 = Poly.gens()
    assert q.isometry_check("tetra", x1 * x3, ONE, n=100_000, seed=1).passed
    z11, _z22, z = Poly.gens()
    assert q.contraction_check("tetra", z11 * z + z * z, ONE, n=100_000, seed=1).passed
