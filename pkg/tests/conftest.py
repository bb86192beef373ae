import math

import pytest

from cavity_entanglement.interaction import AtomParams

DELTA = math.sqrt(2.0 * math.pi ** 2)


@pytest.fixture
def atom():
    """Default detector: gap sqrt(2 pi^2), v = 1/2, eps = 0.01."""
    return AtomParams(DELTA, 0.5)


ACCEPTANCE_LINES = []


@pytest.fixture
def report(capsys):
    """Record one PASS/FAIL line for an acceptance criterion and echo it."""
    def emit(number, ok, detail):
        line = f"[criterion {number:>2}] {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        with capsys.disabled():
            print("\n" + line)
        return ok
    return emit


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
