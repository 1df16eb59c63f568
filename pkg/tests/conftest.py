import cmath
import math

import numpy as np
import pytest

# |c| <= 0.2 grid used by several property checks
SMALL_C_GRID = [0.0, 0.05, -0.12, 0.1j, -0.2j, 0.13 + 0.09j, -0.07 - 0.15j, 0.2]
RING_01 = [0.1 * cmath.exp(2j * math.pi * k / 8) for k in range(8)]


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


def pytest_terminal_summary(terminalreporter):
    import sys
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
