"""Pytest configuration and fixtures."""

import pytest

from sepforge.cache import cache
from sepforge.config import reset_settings
from sepforge.services.graph_service import fixture
from sepforge.services.profile_service import block_profiles, enumerate_tangles


@pytest.fixture(autouse=True)
def fresh_state(monkeypatch):
    """Isolate every test from environment overrides and memoised results."""
    for var in ("SEPFORGE_MAX_VERTICES", "SEPFORGE_MAX_ORDER", "SEPFORGE_SEED", "SEPFORGE_LOG_LEVEL"):
        monkeypatch.delenv(var, raising=False)
    reset_settings()
    cache.clear()
    yield
    reset_settings()
    cache.clear()


@pytest.fixture
def p3():
    return fixture("P3")


@pytest.fixture
def c4():
    return fixture("C4")


@pytest.fixture
def k4():
    return fixture("K4")


@pytest.fixture
def two_k4():
    """K4 on {0,1,2,3} and K4 on {2,3,4,5} sharing the edge 2-3."""
    return fixture("TwoK4")


@pytest.fixture
def two_k4_pendant():
    return fixture("TwoK4Pendant")


@pytest.fixture
def three_k4_path():
    return fixture("ThreeK4Path")


@pytest.fixture
def two_k4_blocks(two_k4):
    """The two 3-block profiles of TwoK4."""
    return block_profiles(two_k4, 3)


@pytest.fixture
def two_k4_tangles(two_k4):
    return enumerate_tangles(two_k4, 3)
