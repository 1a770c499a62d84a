import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from qbgk.phase_grid import GridSpec, build_grid, dyadic_p1_panels
from qbgk.quantum_stats import Statistics
from qbgk.theorem_check import slab_example_boundary


@pytest.fixture(scope="session")
def default_grid():
    """The documented default grid."""
    return build_grid(GridSpec())


@pytest.fixture(scope="session")
def small_grid():
    """Cheap grid for transport/fixed-point unit tests."""
    spec = GridSpec(
        nx=16,
        p1_panels=dyadic_p1_panels(8.0, 4, 6),
        p23_nodes=24,
        p_max=8.0,
    )
    return build_grid(spec)


@pytest.fixture(scope="session")
def fine_grid():
    """Refined grid for tight fixed-point residual checks."""
    spec = GridSpec(
        nx=32,
        p1_panels=dyadic_p1_panels(8.0, 6, 10),
        p23_nodes=64,
        p_max=8.0,
    )
    return build_grid(spec)


@pytest.fixture(scope="session")
def example_grid():
    """Grid resolving the closed-form boundary example (support [10, 11])."""
    spec = GridSpec(
        nx=32,
        p1_panels=dyadic_p1_panels(12.0, 5, 6, breakpoints=(8.0, 10.0, 11.0)),
        p23_nodes=32,
        p_max=8.0,
    )
    return build_grid(spec)


@pytest.fixture(scope="session")
def example_boundary():
    return slab_example_boundary(1.0, 1.0, 10.0, 11.0)


@pytest.fixture(params=[Statistics.BOSON, Statistics.FERMION],
                ids=["boson", "fermion"])
def stat(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20260826)
