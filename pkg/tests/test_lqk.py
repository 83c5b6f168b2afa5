from __future__ import annotations

import math

import numpy as np
import pytest
from conftest import cplx
from hypothesis import assume, given
from hypothesis import strategies as st

from bergman_lab import geometry as g
from bergman_lab import kernels, lqk
from bergman_lab.errors import OutOfRange
from bergman_lab.kernels import VolumeConstant

Z0 = 1j / math.sqrt(3)


def axis_closed(c):
    return (3 + 10 * c**2 + 3 * c**4) / (1 - c**2) ** 6


def test_polynomial_and_roots_against_companion_matrix():
    poly = lqk.axis_family_polynomial()
    np.testing.assert_array_equal(poly.coef, [6, 0, 20, 0, 6])
    roots = lqk.isolate_axis_roots()
    assert len(roots) == 4
    oracle = np.roots(poly.coef[::-1])
    for r in roots:
        assert min(abs(r.root - o) for o in oracle) < 1e-12
        assert r.residual < 1e-12
    inside = [r.root for r in roots if r.in_disc]
    assert len(inside) == 2 and all(r.in_disc for r in roots[:2])
    assert sorted(v.imag for v in inside) == pytest.approx([-1 / math.sqrt(3), 1 / math.sqrt(3)],
                                                           abs=1e-15)
    assert (inside[0] ** 2).real == pytest.approx(-1 / 3, abs=1e-15)


@given(cplx(0.95), cplx(0.95))
def test_axis_family_identity(u, v):
    c = u * np.conj(v)
    assume(abs(1 - c * c) > 1e-3)
    k = kernels.kernel_tetrablock_closed(lqk.axis_point(u), lqk.axis_point(v), lqk.UNIT_VOLUME)
    assert k == pytest.approx(axis_closed(c), rel=1e-9, abs=1e-9)


@given(st.floats(0.6, 0.99), st.floats(0.6, 0.99), cplx(0.3))
def test_scaling_invariance(r1, r2, w):
    # pairs with the same product u conj(v) share the kernel value
    for target in (Z0, w):
        vals = [kernels.kernel_tetrablock_closed(
            lqk.axis_point(r), lqk.axis_point(np.conj(target) / r), lqk.UNIT_VOLUME)
            for r in (r1, r2)]
        scale = abs(axis_closed(abs(target)))
        assert abs(vals[0] - vals[1]) <= 1e-10 * scale


@pytest.mark.parametrize("r", [0.7, 0.8, 0.9])
def test_interior_pairs(r):
    cert = lqk.interior_zero_pair(r)
    assert cert.interior
    assert all(g.is_member(g.TETRABLOCK, p) for p in cert.pair)
    assert cert.relative_residual < 1e-9
    assert cert.extra["bell_relative_residual"] < 1e-8
    d = cert.to_dict()
    assert d["method"] == "AxisRoot" and len(d["pair"]) == 2


def test_residual_is_volume_independent():
    a = lqk.interior_zero_pair(0.8, VolumeConstant(1.0), bell=False)
    b = lqk.interior_zero_pair(0.8, VolumeConstant(5.17), bell=False)
    assert a.relative_residual == pytest.approx(b.relative_residual, rel=1e-6, abs=1e-16)


def test_conjugate_root_gives_conjugate_pair():
    a = lqk.interior_zero_pair(0.8, bell=False)
    b = lqk.interior_zero_pair(0.8, conjugate=True, bell=False)
    np.testing.assert_allclose(np.conj(a.pair[1]), b.pair[1], atol=1e-16)
    assert b.relative_residual < 1e-9


@pytest.mark.parametrize("r", [0.5, 1 / math.sqrt(3), 1.0, 1.2])
def test_out_of_range(r):
    with pytest.raises(OutOfRange):
        lqk.interior_zero_pair(r)


def test_boundary_pair_vanishes():
    # first point phi(0,0,1) on the closure, second phi(0,0,z0) inside
    val = lqk.boundary_axis_kernel(np.conj(Z0))
    assert abs(val) < 1e-14 * abs(lqk.boundary_axis_kernel(0.3))


def test_nonzero_pairs_are_not_certified():
    cert = lqk.certify(lqk.axis_point(0.8), lqk.axis_point(0.3j), bell=False)
    assert cert.relative_residual > 0.1


def test_grid_scan_axis_family():
    certs = lqk.grid_scan_zeros(lqk.axis_family(), lqk.ScanGrid(na=60, nb=60), tol=1e-6)
    assert certs
    for c in certs:
        u, v = c.params
        assert abs(u * v) == pytest.approx(1 / math.sqrt(3), rel=1e-6)
        assert c.interior and c.relative_residual < 1e-6
    idx = [tuple(c.extra["grid_index"]) for c in certs]
    assert idx == sorted(idx)


def test_grid_scan_certificates_survive_bell():
    certs = lqk.grid_scan_zeros(lqk.axis_family(), lqk.ScanGrid(na=40, nb=40), tol=1e-6,
                                bell=True)
    assert certs
    assert max(c.extra["bell_relative_residual"] for c in certs) < 1e-8


def test_grid_scan_negative_results():
    assert lqk.grid_scan_zeros(lqk.axis_family(), tol=0.0) == []
    assert lqk.grid_scan_zeros(lqk.diagonal_family(), lqk.ScanGrid(na=30, nb=30)) == []


def test_rii_has_no_zeros():
    assert lqk.rii_min_kernel_ratio(20_000, seed=1) > 1e-6
