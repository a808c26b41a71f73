import numpy as np
import pytest

from margulis.schottky import mixed_sign_deformation, reference_deformation

ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture(scope="session")
def G_ref():
    return reference_deformation()


@pytest.fixture(scope="session")
def G_mixed():
    return mixed_sign_deformation()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def acceptance():
    """Record one pass/fail line per acceptance criterion."""

    def record(number: int, passed: bool, detail: str) -> None:
        line = f"criterion {number}: {'PASS' if passed else 'FAIL'} | {detail}"
        ACCEPTANCE_LINES[number] = line
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])
