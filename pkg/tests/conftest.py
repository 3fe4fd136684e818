import numpy as np
import pytest

from prodsamp import ProductKind, make_graph, product_graph

ALL_KINDS = [ProductKind.KRONECKER, ProductKind.CARTESIAN, ProductKind.STRONG]


def random_symmetric(n, rng, scale=1.0):
    """Dense symmetric matrix with entries in [-scale, scale]."""
    a = rng.uniform(-scale, scale, size=(n, n))
    return make_graph((a + a.T) / 2.0)


def random_product(shape, kind, rng):
    return product_graph([random_symmetric(n, rng) for n in shape], kind)


def k2():
    return make_graph([[0.0, 1.0], [1.0, 0.0]])


@pytest.fixture
def rng():
    return np.random.default_rng(20240809)
