"""Shared fixtures: catalog complexes and golden instances."""

import pytest

from pseudoform.catalog import (
    boundary_simplex,
    cyclic_polytope_boundary,
    golden_by_name,
    rp2_6,
    suspended_rp2,
    torus_7,
)


@pytest.fixture
def sd3():
    """∂Δ^3, the 4-vertex 2-sphere."""
    return boundary_simplex(3)


@pytest.fixture
def sd4():
    """∂Δ^4, the 5-vertex 3-sphere."""
    return boundary_simplex(4)


@pytest.fixture
def rp2():
    return rp2_6()


@pytest.fixture
def torus():
    return torus_7()


@pytest.fixture
def sigma_rp2():
    """Σ_0 rp2_6 with suspension points 6 and 7."""
    return suspended_rp2()


@pytest.fixture
def cyclic7():
    return cyclic_polytope_boundary(7)


@pytest.fixture(scope="session")
def golden():
    return golden_by_name()
