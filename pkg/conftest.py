"""
TreeCode Hub - shared pytest fixtures
"""

import sys

import pytest

from core.tree import canonicalize


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running statistical or exhaustive checks")


@pytest.fixture
def single():
    return canonicalize([None])


@pytest.fixture
def path3():
    return canonicalize([None, 0, 1])


@pytest.fixture
def star3():
    return canonicalize([None, 0, 0])


@pytest.fixture
def fast_switching():
    """Let threads preempt each other every microsecond"""
    interval = sys.getswitchinterval()
    sys.setswitchinterval(1e-6)
    yield
    sys.setswitchinterval(interval)
