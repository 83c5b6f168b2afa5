from __future__ import annotations

import math

import pytest

from bergman_lab import verify

SMALL = {"samples": 20_000, "vol_samples": 100_000}


@pytest.mark.parametrize("suite", verify.SUITES)
def test_every_suite_passes_at_small_n(suite):
    res = verify.verify_all(verify.VerifyOptions(seed=1, **SMALL), [suite])[0]
    assert res.passed, [c.name for c in res.checks if not c.passed]


def test_seed_independence():
    a = verify.suite_eq1(verify.VerifyOptions(seed=1, **SMALL))
    b = verify.suite_eq1(verify.VerifyOptions(seed=2, **SMALL))
    assert a.passed and b.passed
    for ca, cb in zip(a.checks, b.checks):
        assert ca.value != cb.value
        gap = abs(complex(ca.value) - complex(cb.value))
        assert gap < 4 * math.hypot(ca.stderr, cb.stderr) + 1e-12


def test_deterministic_for_fixed_seed():
    opt = verify.VerifyOptions(seed=3, **SMALL)
    a = verify.suite_isometry(opt).to_dict()
    b = verify.suite_isometry(opt).to_dict()
    assert a == b


def test_tiny_n_keeps_four_sigma_rule():
    res = verify.suite_eq1(verify.VerifyOptions(samples=1000))
    for c in res.checks:
        assert c.threshold == pytest.approx(4 * c.stderr)


def test_sigma_override():
    res = verify.suite_eq1(verify.VerifyOptions(samples=5000, sigmas=2.0))
    for c in res.checks:
        assert c.threshold == pytest.approx(2 * c.stderr)
