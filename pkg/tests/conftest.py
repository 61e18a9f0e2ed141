import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from acgraphs import catalog

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

SMALL = ("Z2", "Z3", "Z4", "Z6", "V4", "Z2xZ4", "S3", "D4", "Q8", "A4")


def el(G, name: str) -> int:
    """Element index by display name, e.g. ``el(S3, "(0 1)")``."""
    return G.element_names.index(name)


def perm_index(G, perm) -> int:
    return G.elements.index(tuple(perm))


@pytest.fixture
def S3():
    return catalog.get("S3")


@pytest.fixture
def A5():
    return catalog.get("A5")


@pytest.fixture
def rng():
    return np.random.default_rng(7)


# acceptance lines collected by tests/test_acceptance.py
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
