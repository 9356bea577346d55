import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from igci import GridDensity, MonotoneMap

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@st.composite
def grid_densities(draw, min_bins=2, max_bins=40):
    m = draw(st.integers(min_bins, max_bins))
    w = draw(st.lists(st.floats(0.05, 10.0), min_size=m, max_size=m))
    return GridDensity.from_weights(np.array(w))


@st.composite
def monotone_maps(draw, max_knots=12):
    k = draw(st.integers(1, max_knots))
    dx = np.array(draw(st.lists(st.floats(0.05, 1.0), min_size=k, max_size=k)))
    dy = np.array(draw(st.lists(st.floats(0.05, 1.0), min_size=k, max_size=k)))
    xs = np.concatenate([[0.0], np.cumsum(dx) / dx.sum()])
    ys = np.concatenate([[0.0], np.cumsum(dy) / dy.sum()])
    xs[-1] = ys[-1] = 1.0
    return MonotoneMap(xs, ys)


@pytest.fixture
def data_dir():
    from pathlib import Path

    return Path(__file__).parent / "data"


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import ACCEPTANCE

    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
