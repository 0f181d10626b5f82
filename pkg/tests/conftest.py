"""Shared expensive fixtures: face descents reused across test modules."""

import pytest

from witness_forge.extremality import find_extremal
from witness_forge.hilbert import Dims


@pytest.fixture(scope="session")
def descents_3x3():
    """Twenty face descents on 3x3 from the maximally mixed state."""
    return [find_extremal(dims=Dims(3, 3), rng_seed=seed, restarts=120)
            for seed in range(20)]


@pytest.fixture(scope="session")
def descents_3x4():
    """Ten face descents on 3x4."""
    return [find_extremal(dims=Dims(3, 4), rng_seed=seed, restarts=150)
            for seed in range(10)]
