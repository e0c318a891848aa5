from __future__ import annotations

import os
from functools import lru_cache

import pytest
from hypothesis import HealthCheck, settings

from systolic import generators

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", deadline=None, max_examples=300, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@lru_cache(maxsize=None)
def gen(name: str, *params: int):
    fn, _ = generators.GENERATORS[name]
    return fn(*params).complex


@pytest.fixture(scope="session")
def octa():
    return gen("octahedron")


@pytest.fixture(scope="session")
def icosa():
    return gen("icosahedron")


@pytest.fixture(scope="session")
def torus44():
    return gen("torus", 4, 4)


@pytest.fixture(scope="session")
def euclid2():
    return gen("euclid", 2)


@pytest.fixture(scope="session")
def euclid3():
    return gen("euclid", 3)


@pytest.fixture(scope="session")
def euclid4():
    return gen("euclid", 4)


@pytest.fixture(scope="session")
def hyp73():
    return gen("hyperbolic", 7, 3)


@pytest.fixture(scope="session")
def hyp74():
    return gen("hyperbolic", 7, 4)


# PASS/FAIL lines recorded by the acceptance suite
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
