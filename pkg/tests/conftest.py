from functools import lru_cache

import pytest

from goldman_tensor.expansion import build_expansion
from goldman_tensor.tensor import SurfaceSignature

ACCEPTANCE_LINES: dict[int, str] = {}


@lru_cache(maxsize=None)
def expansion(g, n, D):
    return build_expansion(SurfaceSignature(g, n, D))


@pytest.fixture
def sig11():
    return SurfaceSignature(1, 0, 6)


@pytest.fixture
def sig2():
    return SurfaceSignature(2, 0, 5)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
