"""Exact brute-force ground truth on small discretized state spaces.

A discrete state space enumerates every sequence over a finite cell grid
(and finite mark levels) up to a length cap, with reference-measure
weights, so distributions, transition matrices, balance conditions, and
stability bounds can all be computed exactly and compared against both
closed forms and sampler output.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .density import NEG_INF, TruncatedModel, checked_log_density
from .errors import (
    ArgumentError,
    CapacityError,
    DegenerateModelError,
)
from .geometry import EMPTY, MarkedPoint, PointSequence, Window, point_key
from .models.ssi import SSIModel, discretise_ssi


@dataclass(frozen=True)
class DiscreteStateSpace:
    """All sequences over cells x mark levels up to length n_max.

    Repeated entries are allowed (the density decides admissibility), so
    there are sum_n (k * marks)^n states.  The weight of a length-n state
    is exp(-area)/n! times the product of cell measure and mark weight per
    entry, matching a Poisson-length sequence of independent draws.
    """

    window: Window
    cells: tuple[tuple[float, float], ...]
    cell_measure: float
    mark_levels: tuple[tuple[object, float], ...]
    n_max: int
    states: tuple[tuple[tuple[int, int], ...], ...]
    log_nu: np.ndarray

    def __post_init__(self):
        # point (ci, mi) lookup table and state index
        pts = {}
        for ci, (x, y) in enumerate(self.cells):
            for mi, (mark, _) in enumerate(self.mark_levels):
                pts[(ci, mi)] = MarkedPoint(x, y, mark)
        object.__setattr__(self, "_points", pts)
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(self.states)})
        object.__setattr__(
            self, "_by_key", {point_key(p): k for k, p in pts.items()}
        )

    @property
    def mu_D(self) -> float:
        return self.window.area

    @property
    def n_states(self) -> int:
        return len(self.states)

    def point(self, ci: int, mi: int) -> MarkedPoint:
        return self._points[(ci, mi)]

    def points(self) -> list[MarkedPoint]:
        return [self._points[k] for k in sorted(self._points)]

    def sequence(self, state) -> PointSequence:
        return PointSequence(self._points[e] for e in state)

    def index_of(self, state) -> int:
        return self._index[state]

    def key_of_point(self, p: MarkedPoint) -> tuple[int, int]:
        try:
            return self._by_key[point_key(p)]
        except KeyError:
            raise ArgumentError(f"point {p} is not a cell/mark-level of this space")

    def state_of(self, seq: PointSequence) -> tuple:
        return tuple(self.key_of_point(p) for p in seq)


def build_state_space(
    k: int,
    marks=((None, 1.0),),
    n_max: int = 3,
    window: Window = Window(0.0, 0.0, 1.0, 1.0),
    budget: int = 10**6,
) -> DiscreteStateSpace:
    """Enumerate the space for a k-cell grid (k factored into the most
    square nx-by-ny layout) with the given mark levels."""
    if k < 1 or n_max < 0:
        raise ArgumentError("need k >= 1 cells and n_max >= 0")
    marks = tuple((m, float(w)) for m, w in marks)
    if abs(sum(w for _, w in marks) - 1.0) > 1e-9:
        raise ArgumentError("mark level weights must sum to 1")
    alphabet = k * len(marks)
    n_states = sum(alphabet**n for n in range(n_max + 1))
    if n_states > budget:
        raise CapacityError(
            f"state space would hold {n_states} states, over the budget {budget}"
        )

    nx = int(math.isqrt(k))
    while k % nx:
        nx -= 1
    ny = k // nx
    cells = tuple(window.grid_centres(nx, ny))
    cell_measure = window.area / k

    letters = tuple((ci, mi) for ci in range(k) for mi in range(len(marks)))
    states = []
    for n in range(n_max + 1):
        states.extend(itertools.product(letters, repeat=n))
    states = tuple(states)

    log_cm = math.log(cell_measure)
    log_w = [math.log(w) for _, w in marks]
    log_nu = np.empty(len(states))
    for i, s in enumerate(states):
        n = len(s)
        log_nu[i] = (
            -window.area - math.lgamma(n + 1) + n * log_cm + sum(log_w[mi] for _, mi in s)
        )
    return DiscreteStateSpace(
        window=window,
        cells=cells,
        cell_measure=cell_measure,
        mark_levels=marks,
        n_max=n_max,
        states=states,
        log_nu=log_nu,
    )


def log_density_vector(model, space: DiscreteStateSpace) -> np.ndarray:
    return np.array(
        [checked_log_density(model, space.sequence(s)) for s in space.states]
    )


def exact_distribution(model, space: DiscreteStateSpace) -> np.ndarray:
    """Normalized probability of every state: f times the state weight."""
    log_w = log_density_vector(model, space) + space.log_nu
    top = log_w.max()
    if top == NEG_INF:
        raise DegenerateModelError("the density vanishes on the whole space")
    w = np.exp(log_w - top)
    return w / w.sum()


@dataclass(frozen=True)
class CountDistribution:
    """Length marginal q_n plus per-state conditional densities.

    ``log_p`` holds log p_n(y) for each state (the conditional density of
    the sequence given its length); the normalized density is recovered
    exactly as exp(area) * n! * q_n * p_n(y).
    """

    q: np.ndarray
    log_p: np.ndarray
    lengths: np.ndarray
    log_f_hat: np.ndarray

    def reconstruct_log_f(self, mu_D: float) -> np.ndarray:
        out = np.full(len(self.lengths), NEG_INF)
        for i, n in enumerate(self.lengths):
            if self.q[n] > 0.0 and self.log_p[i] != NEG_INF:
                out[i] = (
                    mu_D + math.lgamma(n + 1) + math.log(self.q[n]) + self.log_p[i]
                )
        return out


def exact_count_distribution(model, space: DiscreteStateSpace) -> CountDistribution:
    log_f = log_density_vector(model, space)
    log_w = log_f + space.log_nu
    top = log_w.max()
    if top == NEG_INF:
        raise DegenerateModelError("the density vanishes on the whole space")
    w = np.exp(log_w - top)
    total = w.sum()
    pi = w / total
    lengths = np.array([len(s) for s in space.states])
    q = np.zeros(space.n_max + 1)
    for n in range(space.n_max + 1):
        q[n] = pi[lengths == n].sum()
    # normalizer of f with respect to the reference measure
    log_z = top + math.log(total)
    log_f_hat = log_f - log_z
    log_p = np.full(len(lengths), NEG_INF)
    for i, n in enumerate(lengths):
        if q[n] > 0.0 and log_f_hat[i] != NEG_INF:
            log_p[i] = (
                -space.mu_D + log_f_hat[i] - math.lgamma(n + 1) - math.log(q[n])
            )
    return CountDistribution(q=q, log_p=log_p, lengths=lengths, log_f_hat=log_f_hat)


@dataclass(frozen=True)
class MHMatrix:
    """Exact one-step kernel of the chain restricted to positive states."""

    matrix: np.ndarray
    state_indices: np.ndarray  # space indices of the rows/columns


def mh_transition_matrix(
    model,
    space: DiscreteStateSpace,
    drop_area_factor: bool = False,
    budget: int = 4 * 10**6,
) -> MHMatrix:
    """Row-stochastic transition matrix with exactly integrated proposals.

    Birth proposals land on a (cell, level) with probability
    cell_measure * level weight / area; rejected mass and the
    death-on-empty idle stay on the diagonal.  ``drop_area_factor``
    deliberately corrupts the acceptance ratios (negative-control fixture
    for the balance check).
    """
    log_f = log_density_vector(model, space)
    h = [i for i in range(space.n_states) if log_f[i] != NEG_INF]
    if len(h) ** 2 > budget:
        raise CapacityError(
            f"transition matrix needs {len(h) ** 2} entries, over the budget {budget}"
        )
    if not h:
        raise DegenerateModelError("no positive-density states")
    row_of = {idx: r for r, idx in enumerate(h)}
    P = np.zeros((len(h), len(h)))
    log_area = 0.0 if drop_area_factor else math.log(space.mu_D)
    letters = tuple(
        ((ci, mi), space.cell_measure * w / space.mu_D)
        for ci in range(len(space.cells))
        for mi, (_, w) in enumerate(space.mark_levels)
    )

    for r, idx in enumerate(h):
        state = space.states[idx]
        n = len(state)
        diag = 0.0
        # deaths
        if n == 0:
            diag += 0.5
        else:
            for pos in range(n):
                child = state[:pos] + state[pos + 1 :]
                c_log = log_f[space.index_of(child)]
                if c_log == NEG_INF:
                    alpha = 0.0
                else:
                    alpha = math.exp(
                        min(0.0, c_log - log_f[idx] + math.log(n) - log_area)
                    )
                    P[r, row_of[space.index_of(child)]] += 0.5 / n * alpha
                diag += 0.5 / n * (1.0 - alpha)
        # births
        if n == space.n_max:
            diag += 0.5
        else:
            for slot in range(n + 1):
                for letter, weight in letters:
                    target = state[:slot] + (letter,) + state[slot:]
                    t_log = log_f[space.index_of(target)]
                    if t_log == NEG_INF:
                        alpha = 0.0
                    else:
                        alpha = math.exp(
                            min(
                                0.0,
                                t_log - log_f[idx] - math.log(n + 1) + log_area,
                            )
                        )
                        P[r, row_of[space.index_of(target)]] += (
                            0.5 / (n + 1) * weight * alpha
                        )
                    diag += 0.5 / (n + 1) * weight * (1.0 - alpha)
        P[r, r] += diag
    return MHMatrix(matrix=P, state_indices=np.array(h))


def detailed_balance_check(pi: np.ndarray, P: np.ndarray) -> float:
    """Largest violation max_{x,y} |pi(x) P(x,y) - pi(y) P(y,x)|."""
    pi = np.asarray(pi, dtype=float)
    P = np.asarray(P, dtype=float)
    if P.shape != (len(pi), len(pi)):
        raise ArgumentError("dimension mismatch between pi and P")
    flow = pi[:, None] * P
    return float(np.abs(flow - flow.T).max())


def tv_distance(p, q) -> float:
    """Total variation distance between two probability vectors."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise ArgumentError("length mismatch")
    for name, v in (("p", p), ("q", q)):
        if abs(v.sum() - 1.0) > 1e-6 or (v < -1e-12).any():
            raise ArgumentError(f"{name} is not a probability vector")
    return 0.5 * float(np.abs(p - q).sum())


@dataclass(frozen=True)
class StabilityReport:
    hereditary: bool
    hereditary_counterexample: tuple | None
    tight_beta: float | None
    tight_log_beta: float | None
    argmax_transition: tuple | None


def stability_check(model, space: DiscreteStateSpace) -> StabilityReport:
    """Exhaustive hereditariness check and the tight stability bound.

    The tight beta is the supremum of f(s_i(y,u))/f(y) over every
    positive-density state, insertion slot, and space point with the
    target still inside the space.
    """
    log_f = log_density_vector(model, space)

    hered_bad = None
    for idx, state in enumerate(space.states):
        if log_f[idx] == NEG_INF or not state:
            continue
        for pos in range(len(state)):
            child = state[:pos] + state[pos + 1 :]
            if log_f[space.index_of(child)] == NEG_INF:
                hered_bad = (state, child)
                break
        if hered_bad:
            break

    letters = tuple(
        (ci, mi)
        for ci in range(len(space.cells))
        for mi in range(len(space.mark_levels))
    )
    best = NEG_INF
    best_at = None
    for idx, state in enumerate(space.states):
        if log_f[idx] == NEG_INF or len(state) == space.n_max:
            continue
        n = len(state)
        for slot in range(n + 1):
            for letter in letters:
                target = state[:slot] + (letter,) + state[slot:]
                t_log = log_f[space.index_of(target)]
                if t_log == NEG_INF:
                    continue
                ratio = t_log - log_f[idx]
                if ratio > best:
                    best = ratio
                    best_at = (state, slot + 1, letter)
    return StabilityReport(
        hereditary=hered_bad is None,
        hereditary_counterexample=hered_bad,
        tight_beta=math.exp(best) if best != NEG_INF else None,
        tight_log_beta=best if best != NEG_INF else None,
        argmax_transition=best_at,
    )


def empirical_distribution(space: DiscreteStateSpace, counts: dict) -> np.ndarray:
    """Visit counts (keyed by state tuples) as a probability vector over
    the space's enumeration order."""
    v = np.zeros(space.n_states)
    for state, c in counts.items():
        v[space.index_of(state)] = c
    total = v.sum()
    if total <= 0:
        raise ArgumentError("no counts")
    return v / total


def ssi_norm_constants(model: SSIModel, space: DiscreteStateSpace) -> tuple[float, ...]:
    """Exact per-length normalising constants of the inhibition model on a
    discrete domain (cell sums).  Lengths with no admissible state keep
    the conventional constant 1."""
    if space.mark_levels != ((None, 1.0),):
        raise ArgumentError("inhibition models use unmarked spaces")
    if model.cells is None:
        model = discretise_ssi(model, space.cells, space.cell_measure)
    if model.n_max < space.n_max:
        raise ArgumentError("model length cap is below the space cap")
    log_cm = math.log(space.cell_measure)
    totals = [0.0] * (space.n_max + 1)
    for state in space.states:
        n = len(state)
        seq = space.sequence(state)
        log_prod = _ssi_log_sequence_product(model, seq)
        if log_prod != NEG_INF:
            totals[n] += math.exp(log_prod + n * log_cm)
    return tuple(1.0 / t if t > 0.0 else 1.0 for t in totals)


def _ssi_log_sequence_product(model: SSIModel, seq: PointSequence) -> float:
    """log prod_k pi(x_k) 1{d(x_k, prefix) > r} / I(prefix)."""
    total = 0.0
    prefix: list[MarkedPoint] = []
    for p in seq:
        pv = model.pi.value(p.x, p.y)
        if pv <= 0.0:
            return NEG_INF
        for prev in prefix:
            if math.hypot(p.x - prev.x, p.y - prev.y) <= model.r:
                return NEG_INF
        i_val = model.admissible_integral(prefix)
        if i_val <= 0.0:
            return NEG_INF
        total += math.log(pv) - math.log(i_val)
        prefix.append(p)
    return total


def tail_mass_bound(q: np.ndarray, beta: float | None, mu_D: float, n_max: int) -> float | None:
    """Upper bound on the probability mass lost to the length truncation.

    For a locally stable density, q_{n+1}/q_n <= beta mu(D)/(n+1), so the
    discarded tail is at most q_{n_max} * rho/(1-rho) with
    rho = beta mu(D)/(n_max + 1); None when no bound is declared or
    rho >= 1.
    """
    if beta is None:
        return None
    rho = beta * mu_D / (n_max + 1)
    if rho >= 1.0:
        return None
    return float(q[n_max] * rho / (1.0 - rho))


def run_validation(
    model,
    space: DiscreteStateSpace,
    mh_steps: int = 1_000_000,
    bd_t_max: float = 10_000.0,
    seed: int = 20240601,
    beta: float | None = None,
    tolerances: dict | None = None,
) -> dict:
    """Full oracle validation: stability, Markov checks, factorisation
    round trip, detailed balance, and sampler-versus-exact distances.

    Returns the report dictionary emitted by the validate command; the
    "passed" entry is the conjunction of the individual checks.
    """
    from .factorisation import (
        build_interaction_table,
        factorised_log_density,
        verify_markov,
    )
    from .samplers import BDConfig, MHConfig, bd_simulate, mh_run

    tol = {
        "factorisation": 1e-10,
        "locality": 1e-10,
        "balance": 1e-12,
        "tv_mh": 0.02,
        "tv_bd": 0.05,
    }
    tol.update(tolerances or {})

    stability = stability_check(model, space)
    markov = verify_markov(model, space, tol=tol["locality"])

    log_f = log_density_vector(model, space)
    fact_err = 0.0
    if stability.hereditary:
        table = build_interaction_table(
            model, space.points(), max_size=max(space.n_max - 1, 0)
        )
        f_empty = checked_log_density(model, EMPTY)
        for idx, state in enumerate(space.states):
            rebuilt = factorised_log_density(
                table, f_empty, space.sequence(state), model.relation
            )
            if rebuilt == NEG_INF and log_f[idx] == NEG_INF:
                continue
            if math.isinf(rebuilt) or math.isinf(log_f[idx]):
                fact_err = math.inf
                break
            fact_err = max(fact_err, abs(rebuilt - log_f[idx]))
    else:
        fact_err = math.inf

    pi = exact_distribution(model, space)
    mhm = mh_transition_matrix(model, space)
    balance = detailed_balance_check(pi[mhm.state_indices] / pi[mhm.state_indices].sum(), mhm.matrix)

    counts = exact_count_distribution(model, space)
    bound = beta if beta is not None else model.local_stability_bound
    tail = tail_mass_bound(counts.q, bound, space.mu_D, space.n_max)

    truncated = TruncatedModel(model, space.n_max)
    if checked_log_density(model, EMPTY) != NEG_INF:
        initial = EMPTY
    else:
        initial = space.sequence(space.states[int(mhm.state_indices[0])])
    trace_mh = mh_run(
        truncated, MHConfig(steps=mh_steps, seed=seed, initial=initial), space=space
    )
    tv_mh = tv_distance(empirical_distribution(space, trace_mh.state_counts), pi)

    bd_beta = bound if bound is not None else stability.tight_beta
    if bd_beta is not None:
        trace_bd = bd_simulate(
            truncated,
            BDConfig(t_max=bd_t_max, seed=seed + 1, beta=bd_beta, initial=initial),
            space=space,
        )
        tv_bd = tv_distance(empirical_distribution(space, trace_bd.state_counts), pi)
    else:
        # no valid stability bound exists on this space; the jump process
        # cannot be thinned, which is itself a failed check
        tv_bd = None

    checks = {
        "factorisation": fact_err <= tol["factorisation"],
        "locality": markov.locality_ok,
        "hereditary": markov.hereditary,
        "balance": balance <= tol["balance"],
        "tv_mh": tv_mh <= tol["tv_mh"],
        "tv_bd": tv_bd is not None and tv_bd <= tol["tv_bd"],
    }
    return {
        "hereditary": markov.hereditary,
        "tight_beta": stability.tight_beta,
        "factorisation_max_err": fact_err,
        "markov_locality_max_err": markov.max_locality_deviation,
        "mh_balance_max_violation": balance,
        "tv_mh": tv_mh,
        "tv_bd": tv_bd,
        "q_top": float(counts.q[space.n_max]),
        "tail_mass_bound": tail,
        "tolerances": tol,
        "checks": checks,
        "passed": all(checks.values()),
    }
