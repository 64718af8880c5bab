import numpy as np
import pytest

from finpow import LatticeModelParams, lattice_spec, periodic_policy


@pytest.fixture
def unit_lattice():
    """The a=1, b=1 lattice model: stencil (-1, 3, -1), envelope (1, 5, 0)."""
    params = LatticeModelParams(1.0, 1.0)
    return params, lattice_spec(params), periodic_policy(params)


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
