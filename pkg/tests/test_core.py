"""The model-agnostic intensity algebra against hand-derived values."""
import itertools
import math

import numpy as np
import pytest

from seqpp import (
    ArgumentError,
    MarkedPoint,
    NumericEvaluationError,
    PointSequence,
    Window,
    directed_neighbours,
    log_density_from_intensities,
    seq_conditional_intensity,
    total_insertion_intensity,
    trivial_relation,
)
from seqpp.density import NEG_INF, Model, intensity_model
from seqpp.geometry import EMPTY, insert_at
from seqpp.marks import NO_MARKS, fixed_radius_marks
from seqpp.models import SoftCoreModel
from seqpp.oracle import log_density_vector
from seqpp.relations import settler_territory_relation

WIN = Window(-2.0, -2.0, 2.0, 2.0)
WORKED = SoftCoreModel(window=WIN, beta=2.0, gamma=0.5, marks=fixed_radius_marks(1.0))
SEQ1 = PointSequence([MarkedPoint(0.0, 0.0, 1.0)])
U = MarkedPoint(0.5, 0.0, 0.3)


def test_worked_insertion_intensities():
    # appending: u is covered by the existing unit territory, ratio 2*0.5
    assert seq_conditional_intensity(WORKED, SEQ1, 2, U) == pytest.approx(0.5, rel=1e-12)
    # prepending: the old point is outside u's 0.3 territory, ratio 2*1
    assert seq_conditional_intensity(WORKED, SEQ1, 1, U) == pytest.approx(1.0, rel=1e-12)


def test_total_insertion_intensity_sums_positions():
    assert total_insertion_intensity(WORKED, SEQ1, U) == pytest.approx(1.5, rel=1e-12)


def test_total_intensity_single_term_on_empty():
    lam = seq_conditional_intensity(WORKED, EMPTY, 1, U)
    assert total_insertion_intensity(WORKED, EMPTY, U) == pytest.approx(lam)


def test_zero_density_state_gives_zero():
    hard = SoftCoreModel(window=WIN, beta=2.0, gamma=0.0, marks=fixed_radius_marks(1.0))
    covered = insert_at(SEQ1, 2, MarkedPoint(0.2, 0.0, 1.0))
    assert hard.log_density(covered) == NEG_INF
    assert seq_conditional_intensity(hard, covered, 3, U) == 0.0


def test_position_out_of_range():
    with pytest.raises(ArgumentError):
        seq_conditional_intensity(WORKED, SEQ1, 3, U)


def test_pathological_density_raises_with_sequence():
    bad = Model(
        window=WIN,
        marks=NO_MARKS,
        relation=trivial_relation(),
        log_density=lambda seq: float("nan"),
    )
    with pytest.raises(NumericEvaluationError) as err:
        seq_conditional_intensity(bad, EMPTY, 1, U)
    assert err.value.sequence is not None


def test_log_density_from_intensities_empty():
    assert log_density_from_intensities([]) == 0.0


def test_log_density_from_intensities_hand_value():
    assert log_density_from_intensities([2.0, 0.5]) == pytest.approx(math.log(2.0))


def test_log_density_from_intensities_zero_entry():
    assert log_density_from_intensities([2.0, 0.0, 1.0]) == NEG_INF


def test_log_density_from_intensities_rejects_bad_values():
    with pytest.raises(ArgumentError):
        log_density_from_intensities([-1.0])
    with pytest.raises(ArgumentError):
        log_density_from_intensities([float("inf")])


def test_integrability_warning_when_bound_declared():
    with pytest.warns(UserWarning):
        log_density_from_intensities([2.0, 1.9], declared_beta=2.0)


def test_directed_neighbours_examples():
    rel = settler_territory_relation()
    u = MarkedPoint(0.0, 0.0, 1.0)
    seq = PointSequence([MarkedPoint(0.5, 0.0, 1.0), MarkedPoint(3.0, 0.0, 1.0)])
    assert directed_neighbours(rel, u, seq) == [1]
    assert directed_neighbours(trivial_relation(), u, seq) == [1, 2]
    from seqpp import identity_relation

    assert directed_neighbours(identity_relation(), u, seq) == []


def test_append_intensity_permutation_invariant():
    rng = np.random.default_rng(42)
    for n in range(2, 6):
        pts = [
            MarkedPoint(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(0.2, 1.2))
            for _ in range(n)
        ]
        u = MarkedPoint(rng.uniform(-1, 1), rng.uniform(-1, 1), 0.7)
        vals = [
            seq_conditional_intensity(WORKED, PointSequence(perm), n + 1, u)
            for perm in itertools.permutations(pts)
        ]
        assert max(vals) - min(vals) <= 1e-12 * max(1.0, max(vals))


def test_intensity_reconstruction_constant(softcore_unit, space_unit):
    """Rebuilding the density from its own append intensities shifts every
    state's log density by the same constant (log f(empty))."""
    log_f = log_density_vector(softcore_unit, space_unit)
    consts = []
    for idx, state in enumerate(space_unit.states):
        if log_f[idx] == NEG_INF:
            continue
        seq = space_unit.sequence(state)
        lams = []
        for i, p in enumerate(seq):
            prefix = PointSequence(seq.points[:i])
            lams.append(seq_conditional_intensity(softcore_unit, prefix, i + 1, p))
        rebuilt = log_density_from_intensities(lams)
        consts.append(rebuilt - log_f[idx])
    assert max(consts) - min(consts) <= 1e-10


def test_zero_propagation_exhaustive(space_unit):
    """Once the density hits zero, every further insertion stays at zero
    (hard-territory soft core on the full oracle space)."""
    hard = SoftCoreModel(
        window=Window(0.0, 0.0, 1.0, 1.0),
        beta=2.0,
        gamma=0.0,
        marks=fixed_radius_marks(0.6),
    )
    log_f = log_density_vector(hard, space_unit)
    letters = [(ci, mi) for ci in range(4) for mi in range(1)]
    for idx, state in enumerate(space_unit.states):
        if log_f[idx] != NEG_INF or len(state) == space_unit.n_max:
            continue
        for slot in range(len(state) + 1):
            for letter in letters:
                target = state[:slot] + (letter,) + state[slot:]
                assert log_f[space_unit.index_of(target)] == NEG_INF


def test_intensity_model_matches_direct_definition():
    """A model defined by its append intensity reproduces the factorial
    product form."""
    model = intensity_model(
        window=WIN,
        marks=NO_MARKS,
        relation=trivial_relation(),
        append_intensity=lambda seq, u: 1.0 / (len(seq) + 1.0),
    )
    pts = [MarkedPoint(0.1 * j, 0.0) for j in range(3)]
    # lambda_i = 1/i, so f = n! * prod 1/i = 1
    assert model.log_density(PointSequence(pts)) == pytest.approx(0.0, abs=1e-12)
