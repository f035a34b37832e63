from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from conevol.matroid import build_matroid, cfg_a, cfg_c, cfg_d, parallelotope

settings.register_profile(
    "conevol", deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("conevol")

# criterion number -> (passed, detail); filled by tests/test_acceptance.py
ACCEPTANCE: dict = {}


def Q(*vals):
    return tuple(Fraction(v) for v in vals)


@pytest.fixture(scope="session")
def MA():
    return build_matroid(cfg_a())


@pytest.fixture(scope="session")
def MC():
    return build_matroid(cfg_c())


@pytest.fixture(scope="session")
def MD():
    return build_matroid(cfg_d())


@pytest.fixture(scope="session")
def MP3():
    return build_matroid(parallelotope(3))


@pytest.fixture(scope="session")
def octahedron():
    return build_matroid([(1, 0), (0, 1), (1, 1), (1, -1)])


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
