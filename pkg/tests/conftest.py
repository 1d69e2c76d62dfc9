import numpy as np
import pytest

from homcone import chordal
from homcone.graph import Graph
from homcone.talgebra import Element


@pytest.fixture
def star():
    """Three-vertex star in elimination order: leaves 1 and 2, center 3."""
    return Graph(3, frozenset({(1, 3), (2, 3)}))


@pytest.fixture
def star_alg(star):
    return chordal.PatternAlgebra(star)


@pytest.fixture
def x_star(star_alg):
    """Boundary point of the PSD side of the star cone."""
    return star_alg.element_from_dense([[1.0, 0.0, 1.0], [0.0, 1.0, 1.0], [1.0, 1.0, 2.0]])


@pytest.fixture
def rng():
    return np.random.default_rng(42)


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: end-to-end acceptance criteria")
