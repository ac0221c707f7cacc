import pytest


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: longer-running checks (still minutes at most)")
