import numpy as np
import pytest

from seqpp import ArgumentError
from seqpp.marks import (
    MarkDistribution,
    fixed_radius_marks,
    label_marks,
    uniform_radius_marks,
)


def test_uniform_radius_samples_in_support(rng):
    marks = uniform_radius_marks(0.2, 0.7)
    draws = [marks.sample(rng) for _ in range(200)]
    assert all(0.2 <= d <= 0.7 for d in draws)
    assert len(set(round(d, 6) for d in draws)) > 50


def test_uniform_radius_pdf_and_normalisation():
    marks = uniform_radius_marks(1.0, 3.0)
    assert marks.pdf(2.0) == pytest.approx(0.5)
    assert marks.pdf(0.5) == 0.0
    assert marks.check_normalised() == pytest.approx(1.0, abs=1e-6)


def test_fixed_radius_is_deterministic(rng):
    marks = fixed_radius_marks(0.4)
    assert marks.sample(rng) == 0.4
    with pytest.raises(ArgumentError):
        fixed_radius_marks(0.0)


def test_uniform_radius_validation():
    with pytest.raises(ArgumentError):
        uniform_radius_marks(0.5, 0.5)
    with pytest.raises(ArgumentError):
        uniform_radius_marks(-1.0, 0.5)
    with pytest.raises(ArgumentError):
        MarkDistribution("radius", family="exotic", params=(1.0,))


def test_label_sampling_uniform_and_weighted(rng):
    uniform = label_marks(["a", "b", "c"])
    seen = {uniform.sample(rng) for _ in range(100)}
    assert seen == {"a", "b", "c"}
    weighted = label_marks(["x", "y"], weights=[0.9, 0.1])
    draws = [weighted.sample(rng) for _ in range(500)]
    assert draws.count("x") > draws.count("y")


def test_label_validation():
    with pytest.raises(ArgumentError):
        label_marks([])
    with pytest.raises(ArgumentError):
        label_marks(["a", "b"], weights=[0.7, 0.7])
    with pytest.raises(ArgumentError):
        label_marks(["a", "b"], weights=[1.0])


def test_pdf_only_for_density_families():
    with pytest.raises(ArgumentError):
        fixed_radius_marks(1.0).pdf(1.0)


def test_mark_kind_validation():
    with pytest.raises(ArgumentError):
        MarkDistribution("hologram")
