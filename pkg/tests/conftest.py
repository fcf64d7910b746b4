import numpy as np
import pytest

from seqpp import Window
from seqpp.marks import fixed_radius_marks
from seqpp.models import (
    SoftCoreModel,
    SSIModel,
    discretise_ssi,
    truncated_poisson_weights,
    uniform_location_density,
)
from seqpp.oracle import build_state_space

UNIT = Window(0.0, 0.0, 1.0, 1.0)
WIDE = Window(0.0, 0.0, 2.0, 1.0)  # area 2, so area factors are observable


@pytest.fixture(scope="session")
def softcore_unit():
    """Soft core on the unit window: the canonical oracle model."""
    return SoftCoreModel(window=UNIT, beta=2.0, gamma=0.5, marks=fixed_radius_marks(0.6))


@pytest.fixture(scope="session")
def space_unit():
    """4 cells, one mark level (radius 0.6), sequences up to length 3."""
    return build_state_space(k=4, marks=((0.6, 1.0),), n_max=3, window=UNIT)


@pytest.fixture(scope="session")
def softcore_wide():
    return SoftCoreModel(window=WIDE, beta=2.0, gamma=0.5, marks=fixed_radius_marks(0.6))


@pytest.fixture(scope="session")
def space_wide():
    return build_state_space(k=4, marks=((0.6, 1.0),), n_max=3, window=WIDE)


@pytest.fixture(scope="session")
def ssi_q():
    return truncated_poisson_weights(1.0, 3)


@pytest.fixture(scope="session")
def space_unmarked():
    return build_state_space(k=4, marks=((None, 1.0),), n_max=3, window=UNIT)


@pytest.fixture(scope="session")
def ssi_discrete(ssi_q, space_unmarked):
    """Inhibition model with r spanning one cell, integrals as cell sums."""
    model = SSIModel(window=UNIT, pi=uniform_location_density(UNIT), r=0.5, q=ssi_q)
    return discretise_ssi(model, space_unmarked.cells, space_unmarked.cell_measure)


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)


class StubRng:
    """Scripted random source for exercising exact proposal paths."""

    def __init__(self, uniforms=(), integers=()):
        self._u = list(uniforms)
        self._i = list(integers)

    def random(self):
        return self._u.pop(0)

    def integers(self, lo, hi):
        v = self._i.pop(0)
        assert lo <= v < hi, f"scripted integer {v} outside [{lo}, {hi})"
        return v


@pytest.fixture()
def stub_rng_cls():
    return StubRng
