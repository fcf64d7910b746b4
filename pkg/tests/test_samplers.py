import math

import numpy as np
import pytest

from seqpp import ArgumentError, MarkedPoint, ModelContractError, PointSequence, Window
from seqpp.density import NEG_INF, TruncatedModel
from seqpp.factorisation import InteractionTable, interaction_recursion
from seqpp.geometry import EMPTY, insert_at
from seqpp.marks import fixed_radius_marks
from seqpp.models import PoissonModel, SoftCoreModel
from seqpp.samplers import (
    BDConfig,
    EVENT_BIRTH,
    EVENT_DEATH,
    EVENT_IDLE,
    MHConfig,
    batch_mean_stderr,
    bd_birth_rate,
    bd_simulate,
    drift_diagnostic,
    mh_run,
    mh_step,
    preston_diagnostic,
)
from seqpp import seq_conditional_intensity

UNIT = Window(0.0, 0.0, 1.0, 1.0)
WORKED = SoftCoreModel(window=UNIT, beta=2.0, gamma=0.5, marks=fixed_radius_marks(0.3))
ONE = PointSequence([MarkedPoint(0.0, 0.0, 1.0)])


# -- birth rates --------------------------------------------------------------


def test_bd_birth_rate_equals_insertion_intensity():
    u = MarkedPoint(0.5, 0.0, 0.3)
    model = SoftCoreModel(window=UNIT, beta=2.0, gamma=0.5, marks=fixed_radius_marks(1.0))
    assert bd_birth_rate(model, ONE, 2, u) == seq_conditional_intensity(model, ONE, 2, u)
    assert bd_birth_rate(model, ONE, 2, u) == pytest.approx(0.5)


def test_bd_birth_rate_zero_density_state():
    hard = SoftCoreModel(window=UNIT, beta=2.0, gamma=0.0, marks=fixed_radius_marks(1.0))
    dead = PointSequence([MarkedPoint(0.0, 0.0, 1.0), MarkedPoint(0.1, 0.0, 1.0)])
    assert bd_birth_rate(hard, dead, 3, MarkedPoint(0.9, 0.9, 1.0)) == 0.0


def test_bd_birth_rate_bounded_by_stability(softcore_unit, rng):
    for _ in range(50):
        n = int(rng.integers(0, 5))
        seq = PointSequence(
            MarkedPoint(rng.uniform(0, 1), rng.uniform(0, 1), 0.6) for _ in range(n)
        )
        u = MarkedPoint(rng.uniform(0, 1), rng.uniform(0, 1), 0.6)
        i = int(rng.integers(1, n + 2))
        assert bd_birth_rate(softcore_unit, seq, i, u) <= softcore_unit.beta / (n + 1) + 1e-12


# -- single MH steps against hand-computed acceptance -------------------------


def test_mh_step_worked_birth_alpha_half(stub_rng_cls):
    """Insert the covered point at position 2: alpha = 2*1/(2*2) = 0.5."""
    model = SoftCoreModel(window=UNIT, beta=2.0, gamma=0.5, marks=fixed_radius_marks(0.3))
    seq = PointSequence([MarkedPoint(0.0, 0.0, 1.0)])
    # draws: coin, x, y, accept; position and mark come from integers/point-family
    rng = stub_rng_cls(uniforms=[0.1, 0.5, 0.0, 0.499], integers=[2])
    new, ev = mh_step(model, seq, rng)
    assert ev.kind == EVENT_BIRTH and ev.position == 2 and ev.accepted
    assert len(new) == 2 and new[1] == MarkedPoint(0.5, 0.0, 0.3)

    rng = stub_rng_cls(uniforms=[0.1, 0.5, 0.0, 0.501], integers=[2])
    new, ev = mh_step(model, seq, rng)
    assert not ev.accepted and new == seq


def test_mh_step_death_back_is_sure(stub_rng_cls):
    model = SoftCoreModel(window=UNIT, beta=2.0, gamma=0.5, marks=fixed_radius_marks(0.3))
    two = PointSequence([MarkedPoint(0.0, 0.0, 1.0), MarkedPoint(0.5, 0.0, 0.3)])
    rng = stub_rng_cls(uniforms=[0.9, 0.999999], integers=[2])
    new, ev = mh_step(model, two, rng)
    assert ev.kind == EVENT_DEATH and ev.accepted
    assert new == PointSequence([MarkedPoint(0.0, 0.0, 1.0)])


def test_mh_step_death_on_empty_idles(stub_rng_cls):
    rng = stub_rng_cls(uniforms=[0.9])
    new, ev = mh_step(WORKED, EMPTY, rng)
    assert ev.kind == EVENT_IDLE and new == EMPTY


def test_mh_step_requires_positive_state():
    hard = SoftCoreModel(window=UNIT, beta=2.0, gamma=0.0, marks=fixed_radius_marks(1.0))
    dead = PointSequence([MarkedPoint(0.0, 0.0, 1.0), MarkedPoint(0.1, 0.0, 1.0)])
    with pytest.raises(ModelContractError):
        mh_step(hard, dead, np.random.default_rng(0))


# -- full runs ----------------------------------------------------------------


def test_mh_run_zero_steps_keeps_initial():
    trace = mh_run(WORKED, MHConfig(steps=0, seed=5, initial=ONE))
    assert trace.final == ONE and trace.n_events == 0


def test_mh_run_deterministic_and_replayable():
    cfg = MHConfig(steps=4000, seed=99)
    a = mh_run(WORKED, cfg)
    b = mh_run(WORKED, cfg)
    assert a.final == b.final
    for col in a.events:
        assert np.array_equal(a.events[col], b.events[col], equal_nan=True)
    assert a.replay() == a.final


def test_mh_run_distinct_seeds_differ():
    a = mh_run(WORKED, MHConfig(steps=2000, seed=1))
    b = mh_run(WORKED, MHConfig(steps=2000, seed=2))
    assert not (
        a.final == b.final
        and np.array_equal(a.events["kind"], b.events["kind"])
        and np.allclose(a.events["x"], b.events["x"], equal_nan=True)
    )


def test_mh_run_matches_stepwise_replay():
    """mh_run and repeated mh_step consume the same draw stream."""
    cfg = MHConfig(steps=60, seed=31)
    trace = mh_run(WORKED, cfg)
    rng = np.random.default_rng(np.random.SeedSequence(31))
    seq = EMPTY
    for _ in range(60):
        seq, _ = mh_step(WORKED, seq, rng)
    assert seq == trace.final


def test_mh_run_never_leaves_positive_set():
    hard = SoftCoreModel(window=UNIT, beta=3.0, gamma=0.0, marks=fixed_radius_marks(0.2))
    trace = mh_run(hard, MHConfig(steps=4000, seed=17))
    seq = trace.initial
    assert hard.log_density(seq) > NEG_INF
    ev = trace.events
    for j in range(trace.n_events):
        if not ev["accepted"][j]:
            continue
        if ev["kind"][j] == EVENT_BIRTH:
            u = MarkedPoint(ev["x"][j], ev["y"][j], float(ev["mark"][j]))
            seq = insert_at(seq, int(ev["pos"][j]), u)
        else:
            from seqpp import remove_at

            seq = remove_at(seq, int(ev["pos"][j]))
        assert hard.log_density(seq) > NEG_INF


def test_bd_simulate_deterministic_and_h_closed():
    hard = SoftCoreModel(window=UNIT, beta=3.0, gamma=0.0, marks=fixed_radius_marks(0.2))
    cfg = BDConfig(t_max=200.0, seed=3)
    a = bd_simulate(hard, cfg)
    b = bd_simulate(hard, cfg)
    for col in a.events:
        assert np.array_equal(a.events[col], b.events[col], equal_nan=True)
    assert a.replay() == a.final
    # hard territories: no accepted birth inside an earlier point's radius
    assert hard.log_density(a.final) > NEG_INF


def test_bd_requires_beta():
    from seqpp.density import Model
    from seqpp import trivial_relation
    from seqpp.marks import NO_MARKS

    model = Model(
        window=UNIT,
        marks=NO_MARKS,
        relation=trivial_relation(),
        log_density=lambda seq: 0.0,
        local_stability_bound=None,
    )
    with pytest.raises(ArgumentError):
        bd_simulate(model, BDConfig(t_max=10.0, seed=1))


def test_bd_invalid_beta_raises_contract_error():
    model = PoissonModel(window=UNIT, beta=4.0)
    with pytest.raises(ModelContractError):
        bd_simulate(model, BDConfig(t_max=50.0, seed=2, beta=1.0))


def test_bd_oracle_run_checks_beta_eagerly(softcore_unit, space_unit):
    """On an enumerable space the declared bound is verified exhaustively
    before any event is simulated."""
    truncated = TruncatedModel(softcore_unit, space_unit.n_max)
    with pytest.raises(ModelContractError, match="stability bound"):
        bd_simulate(
            truncated, BDConfig(t_max=10.0, seed=2, beta=1.5), space=space_unit
        )
    trace = bd_simulate(
        truncated, BDConfig(t_max=10.0, seed=2, beta=2.0), space=space_unit
    )
    assert trace.n_events > 0


def test_bd_n_cap_truncation_is_recorded():
    model = PoissonModel(window=UNIT, beta=50.0)
    trace = bd_simulate(model, BDConfig(t_max=1000.0, seed=4, n_cap=5))
    assert trace.meta["truncated"]
    assert len(trace.final) == 6  # the birth that crossed the cap ends the run


def test_bd_poisson_equilibrium_mean():
    """Interaction-free births at rate beta: Poisson(beta * area) counts."""
    model = PoissonModel(window=UNIT, beta=2.0)
    trace = bd_simulate(model, BDConfig(t_max=5000.0, seed=12, epoch_dt=0.25))
    lengths = trace.sample_lengths
    assert len(lengths) >= 10_000
    stderr = batch_mean_stderr(lengths, n_batches=50)
    assert abs(float(np.mean(lengths)) - 2.0) <= 3.0 * stderr


def test_retention_probability_factorises(rng):
    """Thinning retention ratio/beta equals the clique-product form."""
    model = SoftCoreModel(window=UNIT, beta=2.0, gamma=0.5, marks=fixed_radius_marks(0.4))
    table = InteractionTable()
    for n in range(0, 6):
        pts = tuple(
            MarkedPoint(rng.uniform(0, 1), rng.uniform(0, 1), rng.uniform(0.2, 0.6))
            for _ in range(n)
        )
        seq = PointSequence(pts)
        u = MarkedPoint(rng.uniform(0, 1), rng.uniform(0, 1), 0.5)
        for i in range(1, n + 2):
            retention = math.exp(
                model.log_insert_ratio(seq, i, u) - math.log(model.beta)
            )
            log_prod = -math.log(model.beta)
            from seqpp.factorisation import _distinct_submultisets, _canonical

            before = _canonical(pts[: i - 1])
            for sub in _distinct_submultisets(before, strict=False):
                log_prod += interaction_recursion(model, u, sub, table=table)
            for j in range(i - 1, n):
                prior = _canonical(pts[:j])
                for sub in _distinct_submultisets(prior, strict=False):
                    log_prod += interaction_recursion(
                        model, pts[j], sub + (u,), table=table
                    )
            assert retention == pytest.approx(math.exp(log_prod), abs=1e-10)


# -- diagnostics --------------------------------------------------------------


def test_preston_closed_form_tail():
    rep = preston_diagnostic(beta=2.0, mu_D=1.0, n_terms=10)
    target = (math.e**2 - 3.0) / 2.0
    assert rep.series2_partial == pytest.approx(target, abs=1e-4)
    assert rep.series2_converges and rep.series1_diverges
    assert rep.series1_ratio_exceeds_one_at == 3  # first k with k/b > 1
    assert rep.conditions_hold


def test_preston_no_births_branch():
    rep = preston_diagnostic(beta=0.0, mu_D=1.0, n_terms=5)
    assert rep.births_vanish and rep.conditions_hold


def test_preston_ratio_flagged_for_any_positive_rate():
    rep = preston_diagnostic(beta=7.0, mu_D=1.0, n_terms=40)
    assert rep.series1_diverges
    assert rep.series1_ratio_exceeds_one_at == 8


def test_preston_argument_errors():
    with pytest.raises(ArgumentError):
        preston_diagnostic(beta=1.0, mu_D=1.0, n_terms=1)


def test_drift_estimate_near_one_for_A_near_one(rng):
    rep = drift_diagnostic(WORKED, ONE, A=1.0 + 1e-9, n_samples=500, rng=rng)
    assert rep.estimate == pytest.approx(1.0, abs=1e-6)


def test_drift_estimate_below_one_for_long_sequences(rng):
    model = SoftCoreModel(window=UNIT, beta=2.0, gamma=0.5, marks=fixed_radius_marks(0.05))
    pts = [
        MarkedPoint(0.05 + 0.9 * (j % 5) / 4.0, 0.05 + 0.9 * (j // 5) / 4.0, 0.05)
        for j in range(20)
    ]
    seq = PointSequence(pts)
    rep = drift_diagnostic(model, seq, A=1.5, n_samples=10_000, rng=rng)
    assert rep.deaths_always_accepted
    assert rep.bound < 1.0
    assert rep.estimate + 1.96 * rep.stderr < 1.0


def test_drift_allowed_above_one_in_small_set(rng):
    model = PoissonModel(window=UNIT, beta=20.0)
    rep = drift_diagnostic(model, EMPTY, A=1.5, n_samples=2000, rng=rng)
    assert rep.estimate > 1.0  # inside the small set, drift need not hold


def test_batch_stderr_requires_enough_data():
    with pytest.raises(ArgumentError):
        batch_mean_stderr([1.0, 2.0], n_batches=50)
