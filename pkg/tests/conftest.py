"""Shared fixtures: the quadratic/quadratic/identity reference configuration
and a seeded random generator."""

import numpy as np
import pytest

from univalence_lab import DiskGrid, ParameterSet, catalog_build


@pytest.fixture(scope="session")
def f_quarter():
    """f(z) = z + z^2/4."""
    return catalog_build("quadratic", {"c": 0.25})


@pytest.fixture(scope="session")
def g_half():
    """g(z) = z + z^2/2."""
    return catalog_build("quadratic", {"c": 0.5})


@pytest.fixture(scope="session")
def identity():
    return catalog_build("identity")


@pytest.fixture(scope="session")
def params_ref():
    """alpha = beta = 1/2, gamma = 1, m = 1: the reference passing case."""
    return ParameterSet(alpha=0.5, beta=0.5, gamma=1.0, m=1.0)


@pytest.fixture(scope="session")
def small_grid():
    """Coarse grid for fast module-level scans."""
    return DiskGrid(radii=(0.3, 0.6, 0.9), angles_per_radius=64, refine_steps=8)


@pytest.fixture()
def rng():
    return np.random.default_rng(12345)


def random_disk_points(rng, n, r_max=0.9):
    """n points uniform in angle, sqrt-uniform in radius, |z| <= r_max."""
    r = r_max * np.sqrt(rng.uniform(0.0, 1.0, n))
    th = rng.uniform(0.0, 2.0 * np.pi, n)
    return r * np.exp(1j * th)
