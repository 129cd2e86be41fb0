import numpy as np
import pytest

from immobilization import make_simplex, normals_from_vertices

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture
def triangle():
    return make_simplex([[0, 0], [1, 0], [0, 1]])


@pytest.fixture
def triangle_fan(triangle):
    return normals_from_vertices(triangle)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
