import math

import numpy as np
import pytest

from sepdec.models.core_types import Tolerances
from sepdec.services.decomposer import Decomposer
from sepdec.services.instance_gen import InstanceGenerator
from sepdec.services.ppt_structure import StructureAnalyzer, wrap_angle
from sepdec.services.state_builder import StateBuilder


def angle_gap(first: float, second: float) -> float:
    return abs(wrap_angle(first - second))


def overlap(first: np.ndarray, second: np.ndarray) -> float:
    return float(abs(np.vdot(first, second)))


@pytest.fixture
def tolerances() -> Tolerances:
    return Tolerances()


@pytest.fixture
def generator(tolerances: Tolerances) -> InstanceGenerator:
    return InstanceGenerator(tolerances)


@pytest.fixture
def builder(tolerances: Tolerances) -> StateBuilder:
    return StateBuilder(tolerances)


@pytest.fixture
def analyzer(tolerances: Tolerances) -> StructureAnalyzer:
    return StructureAnalyzer(tolerances)


@pytest.fixture
def decomposer(tolerances: Tolerances) -> Decomposer:
    return Decomposer(tolerances)


@pytest.fixture
def w2(generator: InstanceGenerator):
    return generator.gen_w2()


@pytest.fixture
def uniform2(generator: InstanceGenerator):
    return generator.gen_uniform(2)


@pytest.fixture
def plus_minus() -> tuple[np.ndarray, np.ndarray]:
    root = 1.0 / math.sqrt(2.0)
    return np.array([root, root]), np.array([root, -root])
