# this_file: tests/conftest.py
"""Shared meshes and their assembled operators."""

from dataclasses import dataclass

import numpy as np
import pytest

from pdangles.dtn import DtNSolver
from pdangles.forms import DiscreteForms
from pdangles.hodge import HodgeDecomposition
from pdangles.mesh import (
    generate_annulus,
    generate_disk,
    generate_flat_torus,
    generate_punctured_torus,
)


@dataclass
class Pipeline:
    """One mesh with its discrete forms, decomposition and (when bounded) DtN solver."""

    forms: DiscreteForms
    hodge: HodgeDecomposition
    solver: DtNSolver | None


def _pipeline(complex_, geometry) -> Pipeline:
    forms = DiscreteForms(complex_, geometry)
    solver = None if forms.is_closed else DtNSolver(forms)
    return Pipeline(forms, HodgeDecomposition(forms), solver)


@pytest.fixture(scope="session")
def annulus() -> Pipeline:
    return _pipeline(*generate_annulus(3, 16, 1.0, 2.0))


@pytest.fixture(scope="session")
def punctured_torus() -> Pipeline:
    return _pipeline(*generate_punctured_torus(8, 2))


@pytest.fixture(scope="session")
def disk() -> Pipeline:
    return _pipeline(*generate_disk(6, 8))


@pytest.fixture(scope="session")
def flat_torus() -> Pipeline:
    return _pipeline(*generate_flat_torus(5))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)
