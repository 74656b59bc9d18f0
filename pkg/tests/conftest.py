import math

import pytest

from spoofrate.scenario import Scenario

_ACCEPTANCE = []


@pytest.fixture
def record():
    """Log one acceptance criterion; the summary prints at the end of the run."""
    def _record(name, ok, detail=""):
        _ACCEPTANCE.append((name, bool(ok), detail))
        return ok
    return _record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")


@pytest.fixture
def ref():
    """h = g = 1, P = 10 dB, R = 2 bps/Hz with Q = 10 (linear)."""
    return Scenario(1.0, 1.0, 10.0, 2.0, 10.0)


def approx(x, rel=1e-9, abs=1e-12):
    return pytest.approx(x, rel=rel, abs=abs)


SQRT10 = math.sqrt(10.0)
