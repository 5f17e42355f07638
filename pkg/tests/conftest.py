from __future__ import annotations

import os

import pytest
from hypothesis import HealthCheck, settings

from tradeforge.enumeration import Enumerator

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", parent=settings.get_profile("default"), max_examples=30)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

_SHARED = Enumerator()
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def enumerators():
    """A memoising enumerator shared across tests.

    Levels with different caps feed each other (a cap-15 level at t = 3
    reads the cap-7 levels at t = 2), so one cache serves every table.
    """
    return lambda cap=None: _SHARED


@pytest.fixture(scope="session")
def report():
    """Record one PASS/FAIL line per acceptance criterion."""
    def emit(number: int, ok: bool, detail: str) -> None:
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
    return emit


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
