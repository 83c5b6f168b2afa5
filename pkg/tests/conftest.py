from __future__ import annotations

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def cplx(max_abs: float = 1.0):
    """Complex numbers in the closed disc of radius ``max_abs``."""
    return st.builds(
        lambda r, t: complex(r * np.cos(2 * np.pi * t), r * np.sin(2 * np.pi * t)),
        st.floats(0, max_abs), st.floats(0, 1))


def points(dim: int = 3, max_abs: float = 1.0):
    return st.lists(cplx(max_abs), min_size=dim, max_size=dim).map(
        lambda v: np.array(v, dtype=np.complex128))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
