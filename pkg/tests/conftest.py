import math

import numpy as np
import pytest

from angleset import Geodesic, ModelDomain

PI = math.pi


@pytest.fixture
def H():
    return ModelDomain.half_plane()


@pytest.fixture
def ray_H(H):
    """Geodesic ray [1, inf) in the right half-plane."""
    return Geodesic.ray(H, 1.0)


@pytest.fixture
def spiral():
    n = np.arange(1, 5001, dtype=float)
    return n * np.exp(1j * (PI / 6) * np.sin(n))
