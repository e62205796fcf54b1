import numpy as np
import pytest

from stackseek.scenarios import (IllustrativeConfig, TestbedConfig,
                                 build_energy_community, build_illustrative,
                                 build_monotone_testbed)


@pytest.fixture(scope="session")
def testbed():
    return build_monotone_testbed()


@pytest.fixture(scope="session")
def testbed_strong():
    return build_monotone_testbed(TestbedConfig(shift=0.5))


@pytest.fixture(scope="session")
def illustrative():
    # eps = 0.1: the monotone configuration sits at y = 0.9
    return build_illustrative(IllustrativeConfig(epsilon=0.1))


@pytest.fixture(scope="session")
def illustrative_monotone():
    return build_illustrative(IllustrativeConfig(epsilon=0.1, monotonicity="monotone"))


@pytest.fixture(scope="session")
def energy():
    return build_energy_community()


def fd_gradient(f, x, step=1e-6):
    """Central-difference gradient, the reference for analytic oracles."""
    x = np.asarray(x, dtype=float)
    g = np.empty_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = step
        g[i] = (f(x + e) - f(x - e)) / (2 * step)
    return g
