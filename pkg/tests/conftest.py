import numpy as np
import pytest

from parosc import preset


@pytest.fixture(scope="session")
def scenarios():
    return {name: preset(name) for name in ("tanh_step", "free_particle", "constant")}


@pytest.fixture(scope="session")
def built(scenarios):
    return {name: sc.build() for name, sc in scenarios.items()}


@pytest.fixture(scope="session")
def tanh(built):
    return built["tanh_step"]


@pytest.fixture(scope="session")
def tanh_grid(scenarios, tanh):
    return scenarios["tanh_step"].state_grid(tanh, n_max=16)


@pytest.fixture(scope="session")
def free(built):
    return built["free_particle"]


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240611)
