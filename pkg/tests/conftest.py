import numpy as np
import pytest

from vilenkin.group import RadixSequence

TEST_RADICES = {
    "dyadic": (RadixSequence.parse("2^8"), 8),
    "mixed": (RadixSequence.parse("2,3,4,3,2"), 5),
    "triadic": (RadixSequence.parse("3^5"), 5),
}


@pytest.fixture(params=sorted(TEST_RADICES))
def radix_n(request):
    return TEST_RADICES[request.param]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# criterion -> (ok, detail), filled by test_acceptance.py
ACCEPTANCE_LINES: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        ok, detail = ACCEPTANCE_LINES[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
