import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from dunkl_kg.measures import default_grid, make_mult, profile  # noqa: E402
from dunkl_kg.propagator import CauchyData  # noqa: E402


@pytest.fixture(scope="session")
def grid():
    return default_grid()


def gaussian_data(n, gamma, m=1.0, grid=None, f_amp=0.5):
    grid = grid or default_grid()
    f = profile(grid, lambda r: f_amp * np.exp(-r * r))
    g = profile(grid, lambda r: np.exp(-0.5 * r * r))
    return CauchyData(f, g, m, make_mult(n, gamma))


@pytest.fixture
def make_data():
    return gaussian_data


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "REPORT", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
