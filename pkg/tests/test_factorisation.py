import itertools
import math

import pytest

from seqpp import (
    ArgumentError,
    CapacityError,
    MarkedPoint,
    ModelContractError,
    PointSequence,
    Window,
    ball_relation,
    trivial_relation,
)
from seqpp.density import NEG_INF, Model, checked_log_density
from seqpp.factorisation import (
    InteractionTable,
    build_interaction_table,
    factorised_log_density,
    interaction_recursion,
    is_clique,
    ssi_interaction_closed_form,
    verify_markov,
    write_interaction_table_csv,
)
from seqpp.geometry import EMPTY
from seqpp.marks import fixed_radius_marks
from seqpp.models import (
    SoftCoreModel,
    SSIModel,
    pairwise_quadratic_model,
    truncated_poisson_weights,
    uniform_location_density,
)
from seqpp.models.ssi import discretise_ssi
from seqpp.oracle import log_density_vector
from seqpp.relations import settler_territory_relation

WIN = Window(-2.0, -2.0, 2.0, 2.0)
UNIT = Window(0.0, 0.0, 1.0, 1.0)


def softcore(window=WIN, gamma=0.5):
    return SoftCoreModel(window=window, beta=2.0, gamma=gamma, marks=fixed_radius_marks(1.0))


# -- cliques ------------------------------------------------------------------


def test_empty_set_is_clique():
    rel = settler_territory_relation()
    assert is_clique(rel, MarkedPoint(0, 0, 1.0), ())


def test_trivial_relation_everything_is_clique():
    pts = [MarkedPoint(i, 0.0, 1.0) for i in range(3)]
    assert is_clique(trivial_relation(), MarkedPoint(9, 9, 1.0), pts)


def test_territory_clique_example():
    rel = settler_territory_relation()
    u = MarkedPoint(0.0, 0.0, 1.0)
    assert not is_clique(rel, u, [MarkedPoint(3.0, 0.0, 1.0)])
    assert is_clique(rel, u, [MarkedPoint(0.5, 0.0, 1.0)])


# -- the recursion ------------------------------------------------------------


def test_softcore_phi_empty_is_log_beta():
    model = softcore()
    u = MarkedPoint(0.0, 0.0, 1.0)
    assert interaction_recursion(model, u, ()) == pytest.approx(math.log(2.0))


def test_softcore_phi_pair_is_gamma_indicator():
    model = softcore()
    u = MarkedPoint(0.5, 0.0, 0.3)
    inside = MarkedPoint(0.0, 0.0, 1.0)  # covers u
    outside = MarkedPoint(1.9, 0.0, 0.3)
    assert interaction_recursion(model, u, (inside,)) == pytest.approx(math.log(0.5))
    assert interaction_recursion(model, u, (outside,)) == pytest.approx(0.0, abs=1e-14)


def test_softcore_phi_larger_sets_are_one():
    model = softcore()
    u = MarkedPoint(0.0, 0.0, 1.0)
    a = MarkedPoint(0.3, 0.0, 1.0)
    b = MarkedPoint(0.0, 0.3, 1.0)
    assert interaction_recursion(model, u, (a, b)) == pytest.approx(0.0, abs=1e-12)


def test_phi_permutation_invariant(rng):
    model = softcore()
    for n in range(2, 6):
        pts = tuple(
            MarkedPoint(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(0.3, 1.4))
            for _ in range(n)
        )
        u = MarkedPoint(rng.uniform(-1, 1), rng.uniform(-1, 1), 0.8)
        vals = {
            round(interaction_recursion(model, u, perm), 12)
            for perm in itertools.permutations(pts)
        }
        assert len(vals) == 1


def test_recursion_capacity_cap():
    model = softcore()
    pts = tuple(MarkedPoint(0.1 * j, 0.0, 1.0) for j in range(4))
    with pytest.raises(CapacityError):
        interaction_recursion(model, MarkedPoint(0, 0, 1.0), pts, clique_size_cap=3)


def test_recursion_flags_non_hereditary_model():
    q = (0.0, 0.0, 1.0)  # all mass on length 2
    model = SSIModel(window=UNIT, pi=uniform_location_density(UNIT), r=0.1, q=q)
    a = MarkedPoint(0.2, 0.2)
    x = MarkedPoint(0.8, 0.8)
    with pytest.raises(ModelContractError):
        interaction_recursion(model, x, (a,), relation=trivial_relation())


def test_zero_propagation_of_phi():
    """phi(u, z) = 0 forces zero density for (z, u) in any order."""
    model = softcore(gamma=0.0)
    u = MarkedPoint(0.5, 0.0, 0.3)
    inside = MarkedPoint(0.0, 0.0, 1.0)
    far = MarkedPoint(1.9, 1.9, 0.1)
    assert interaction_recursion(model, u, (inside,)) == NEG_INF
    for perm in itertools.permutations((inside, far)):
        assert model.log_density(PointSequence(perm + (u,))) == NEG_INF


# -- reassembly ---------------------------------------------------------------


def test_factorised_density_trivial_cases():
    model = softcore()
    table = build_interaction_table(model, [MarkedPoint(0.0, 0.0, 1.0)], max_size=0)
    assert factorised_log_density(table, -1.5, EMPTY, model.relation) == -1.5
    one = PointSequence([MarkedPoint(0.0, 0.0, 1.0)])
    got = factorised_log_density(table, 0.0, one, model.relation)
    assert got == pytest.approx(math.log(2.0))


def test_factorised_missing_clique_key_raises():
    model = softcore()
    table = InteractionTable()
    with pytest.raises(LookupError, match="interaction entry"):
        factorised_log_density(
            table, 0.0, PointSequence([MarkedPoint(0, 0, 1.0)]), model.relation
        )


def test_softcore_three_point_round_trip(rng):
    model = softcore()
    pts = tuple(
        MarkedPoint(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(0.3, 1.2))
        for _ in range(3)
    )
    table = build_interaction_table(model, pts, max_size=2)
    seq = PointSequence(pts)
    rebuilt = factorised_log_density(table, 0.0, seq, model.relation)
    assert rebuilt == pytest.approx(model.log_density(seq), abs=1e-10)


def _round_trip_max_err(model, space, table):
    log_f = log_density_vector(model, space)
    f_empty = checked_log_density(model, EMPTY)
    worst = 0.0
    for idx, state in enumerate(space.states):
        rebuilt = factorised_log_density(
            table, f_empty, space.sequence(state), model.relation
        )
        if rebuilt == NEG_INF and log_f[idx] == NEG_INF:
            continue
        if math.isinf(rebuilt) or math.isinf(log_f[idx]):
            return math.inf
        worst = max(worst, abs(rebuilt - log_f[idx]))
    return worst


def test_exhaustive_round_trip_softcore(softcore_unit, space_unit):
    table = build_interaction_table(softcore_unit, space_unit.points(), max_size=2)
    assert _round_trip_max_err(softcore_unit, space_unit, table) <= 1e-10


def test_invader_variant_round_trip(rng):
    """The own-mark variant factorises over its own directed relation."""
    model = SoftCoreModel(
        window=WIN,
        beta=2.0,
        gamma=0.5,
        marks=fixed_radius_marks(1.0),
        variant="invader",
    )
    pts = tuple(
        MarkedPoint(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(0.3, 1.2))
        for _ in range(4)
    )
    table = build_interaction_table(model, pts, max_size=3)
    for k in (2, 3, 4):
        for perm in itertools.permutations(pts, k):
            seq = PointSequence(perm)
            rebuilt = factorised_log_density(table, 0.0, seq, model.relation)
            assert rebuilt == pytest.approx(model.log_density(seq), abs=1e-10)


def test_theorem_converse_synthesized_density_is_markov(softcore_unit, space_unit):
    """Perturbing clique entries still yields a density whose append ratio
    sees only directed neighbours."""
    # size-3 sets included: the locality check appends to full-length states
    table = build_interaction_table(softcore_unit, space_unit.points(), max_size=3)
    perturbed = InteractionTable(
        relation_name=table.relation_name,
        entries={
            k: (v + math.log(1.3) if len(k[1]) == 1 else v)
            for k, v in table.entries.items()
        },
    )
    relation = softcore_unit.relation
    synth = Model(
        window=softcore_unit.window,
        marks=softcore_unit.marks,
        relation=relation,
        log_density=lambda seq: factorised_log_density(perturbed, 0.0, seq, relation),
    )
    report = verify_markov(synth, space_unit)
    assert report.hereditary and report.locality_ok


# -- markov verification ------------------------------------------------------


def test_verify_markov_softcore_passes(softcore_unit, space_unit):
    report = verify_markov(softcore_unit, space_unit)
    assert report.hereditary
    assert report.locality_ok
    assert report.reflexive


def test_verify_markov_ssi_trivial_vs_ball(ssi_discrete, space_unmarked):
    trivial = verify_markov(ssi_discrete, space_unmarked)
    assert trivial.hereditary and trivial.locality_ok
    ball = verify_markov(ssi_discrete, space_unmarked, relation=ball_relation(0.5))
    assert ball.hereditary
    assert not ball.locality_ok
    assert ball.locality_counterexamples


def test_verify_markov_point_mass_counts_not_hereditary(space_unmarked):
    q = (0.0, 0.0, 1.0, 0.0)
    model = SSIModel(window=UNIT, pi=uniform_location_density(UNIT), r=0.5, q=q)
    model = discretise_ssi(model, space_unmarked.cells, space_unmarked.cell_measure)
    report = verify_markov(model, space_unmarked)
    assert not report.hereditary
    state, child = report.hereditary_counterexamples[0]
    assert len(child) == 1  # a length-(n0 - 1) witness


# -- inhibition closed form ---------------------------------------------------


def test_closed_form_base_case(ssi_discrete):
    x = MarkedPoint(0.25, 0.25)
    r1 = ssi_discrete.r_ratio(1)
    got = ssi_interaction_closed_form(ssi_discrete, x, ())
    assert got == pytest.approx(math.log(r1 * 1.0))


def test_closed_form_blocked_head(ssi_discrete):
    x = MarkedPoint(0.25, 0.25)
    near = MarkedPoint(0.75, 0.25)
    assert ssi_interaction_closed_form(ssi_discrete, x, (near,)) == NEG_INF


def test_closed_form_rejects_duplicates(ssi_discrete):
    a = MarkedPoint(0.25, 0.25)
    with pytest.raises(ArgumentError):
        ssi_interaction_closed_form(ssi_discrete, MarkedPoint(0.75, 0.75), (a, a))


def test_closed_form_normalised_mode_needs_constants(ssi_discrete):
    from seqpp import UnsupportedModeError

    head = MarkedPoint(0.25, 0.25)
    with pytest.raises(UnsupportedModeError):
        ssi_interaction_closed_form(
            ssi_discrete, head, (), require_length_normalisation=True
        )
    import dataclasses

    c = tuple(1.0 for _ in ssi_discrete.q)
    model = dataclasses.replace(ssi_discrete, norm_constants=c)
    val = ssi_interaction_closed_form(model, head, (), require_length_normalisation=True)
    assert val == ssi_interaction_closed_form(ssi_discrete, head, ())


def test_closed_form_equals_recursion_everywhere(ssi_discrete, space_unmarked):
    """Inclusion-exclusion formula vs the generic recursion on every
    distinct, internally separated clique key of the discrete domain."""
    pts = space_unmarked.points()
    table = InteractionTable()
    checked = 0
    for size in range(0, space_unmarked.n_max):
        for subset in itertools.combinations(pts, size):
            separated = all(
                math.hypot(a.x - b.x, a.y - b.y) > ssi_discrete.r
                for a, b in itertools.combinations(subset, 2)
            )
            if not separated:
                continue
            for head in pts:
                rec = interaction_recursion(
                    ssi_discrete, head, subset, table=table, relation=trivial_relation()
                )
                closed = ssi_interaction_closed_form(ssi_discrete, head, subset)
                checked += 1
                if rec == NEG_INF or closed == NEG_INF:
                    assert rec == closed
                else:
                    assert rec == pytest.approx(closed, abs=1e-10)
    assert checked >= 28


def test_newton_binomium_alternating_sum():
    """The combinatorial identity behind the closed form: an alternating
    sum of a constant over all subsets cancels for non-empty base sets."""
    for n in range(1, 7):
        total = 0.0
        for mask in range(1 << n):
            size = bin(mask).count("1")
            total += (-1) ** (n - size) * 7.25
        assert total == pytest.approx(0.0, abs=1e-12)
    # and survives as the binomial expansion when summing subset sizes
    assert sum((-1) ** (3 - bin(m).count("1")) * bin(m).count("1") for m in range(8)) == 0


# -- csv export ---------------------------------------------------------------


def test_interaction_table_csv(tmp_path, softcore_unit, space_unit):
    table = build_interaction_table(softcore_unit, space_unit.points(), max_size=1)
    path = tmp_path / "table.csv"
    write_interaction_table_csv(table, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "head_x,head_y,head_mark,set_key,log_phi"
    assert len(lines) == len(table) + 1
    # empty-set rows exist and carry log beta
    empty_rows = [l for l in lines[1:] if l.split(",")[3] == ""]
    assert empty_rows and all(
        float(l.split(",")[4]) == pytest.approx(math.log(2.0)) for l in empty_rows
    )
