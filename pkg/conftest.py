# conftest.py
import numpy as np
import pytest

from src.services.algebra import AlgebraSpec, Representation
from src.services.clifford import build_gammas
from src.services.models import electrodynamics_twist, manifold_fiber_twist, sm_structural_fiber
from src.services.numerics import Tolerance
from src.services.triple import FiniteTriple
from src.services.twist import build_minimal_twist


@pytest.fixture
def tol():
    return Tolerance(1e-10)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def gammas():
    return build_gammas()


@pytest.fixture(scope="session")
def manifold():
    return manifold_fiber_twist()


@pytest.fixture(scope="session")
def manifold_twist(manifold):
    return build_minimal_twist(manifold.triple, manifold.twist_operator)


@pytest.fixture(scope="session")
def electrodynamics():
    return electrodynamics_twist()


@pytest.fixture(scope="session")
def electrodynamics_twist_built(electrodynamics):
    return build_minimal_twist(electrodynamics.triple, electrodynamics.twist_operator)


@pytest.fixture(scope="session")
def sm():
    return sm_structural_fiber()


@pytest.fixture(scope="session")
def two_point_twist():
    """C + C acting as diag(a, b, a, b), twisted by diag(1, 1, -1, -1)."""
    algebra = AlgebraSpec.of("C", "C")
    rep = Representation.of(algebra, (0, 1), (1, 1), (0, 1), (1, 1))
    triple = FiniteTriple(rep=rep, dirac=np.zeros((4, 4), dtype=complex))
    t = np.diag([1, 1, -1, -1]).astype(complex)
    return build_minimal_twist(triple, t)
