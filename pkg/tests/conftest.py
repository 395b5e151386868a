import numpy as np
import pytest

from eamchain import ChainConfig, ToyFamilyParams, make_toy_potentials


@pytest.fixture(scope="session")
def toy():
    return make_toy_potentials(ToyFamilyParams())


@pytest.fixture(scope="session")
def pair_only():
    """Toy family with the embedding switched off (G = 0)."""
    return make_toy_potentials(ToyFamilyParams(c=0.0))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def cfg16():
    return ChainConfig(16, 1.0)

