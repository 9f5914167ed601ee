"""Shared fixtures: small hand-checkable graphs."""

import numpy as np
import pytest

from graphcoreset import Graph


@pytest.fixture
def path3() -> Graph:
    """Path 0-1-2 with unit weights."""
    return Graph(3, np.array([[0, 1], [1, 2]]), np.ones(2))


@pytest.fixture
def star4() -> Graph:
    """Star with center 0 and leaves 1..3."""
    return Graph(4, np.array([[0, 1], [0, 2], [0, 3]]), np.ones(3))


@pytest.fixture
def two_triangles() -> Graph:
    """Triangles {0,1,2} and {3,4,5} joined by the bridge (2,3)."""
    edges = np.array([[0, 1], [0, 2], [1, 2], [2, 3], [3, 4], [3, 5], [4, 5]])
    return Graph(6, edges, np.ones(7), labels=np.array([0, 0, 0, 1, 1, 1]))
