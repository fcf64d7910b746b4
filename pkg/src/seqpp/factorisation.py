"""Directed clique factorisation of sequential densities.

A density is Markov with respect to a directed neighbour relation exactly
when it factorises over per-point clique interaction terms:

    f(y_1..y_n) = f(empty) * prod_i prod_{z <= {y_1..y_{i-1}}} phi(y_i, z)

where phi(u, z) = 1 unless every member of z is a directed neighbour of u.
The interaction terms are constructed recursively from density ratios,
with the convention 0/0 = 0.  Second arguments are canonical *multisets*
(sorted tuples, repeats kept): on enumerable spaces sequences may repeat
points, and append ratios can depend on neighbour multiplicity.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

from .density import NEG_INF, checked_log_density
from .errors import (
    ArgumentError,
    CapacityError,
    ModelContractError,
    UnsupportedModeError,
)
from .geometry import (
    MarkedPoint,
    PointSequence,
    multiset_key,
    point_key,
)
from .relations import NeighbourRelation


def is_clique(relation: NeighbourRelation, u: MarkedPoint, z) -> bool:
    """True iff every member of z is a directed neighbour of u (empty: yes)."""
    return all(relation(u, p) for p in z)


def _canonical(points) -> tuple[MarkedPoint, ...]:
    return tuple(sorted(points, key=point_key))


def _distinct_submultisets(canon: tuple[MarkedPoint, ...], strict: bool):
    """Distinct sub-multisets of an already-sorted tuple, as sorted tuples."""
    n = len(canon)
    out: dict[tuple, tuple[MarkedPoint, ...]] = {}
    top = (1 << n) - 1 if strict else 1 << n
    for mask in range(top):
        sel = tuple(canon[j] for j in range(n) if (mask >> j) & 1)
        out.setdefault(tuple(point_key(p) for p in sel), sel)
    return list(out.values())


@dataclass
class InteractionTable:
    """Log interaction values keyed by (head point, canonical neighbour set).

    Only clique keys are stored; non-clique keys are implicitly log 1 = 0.
    The table doubles as the memo of the recursive construction, so it is
    bound to one (model, relation) pair.  Concurrent reads are fine once a
    sequential warm-up pass has populated it; interleaving reads with
    writes needs external serialisation.
    """

    relation_name: str = ""
    entries: dict[tuple, float] = field(default_factory=dict)

    def key(self, head: MarkedPoint, zpoints) -> tuple:
        return (point_key(head), multiset_key(zpoints))

    def value(self, relation: NeighbourRelation, head: MarkedPoint, zpoints) -> float:
        k = self.key(head, zpoints)
        hit = self.entries.get(k)
        if hit is not None:
            return hit
        if not is_clique(relation, head, zpoints):
            return 0.0
        raise LookupError(f"no interaction entry for clique key {k}")

    def __len__(self) -> int:
        return len(self.entries)


def interaction_recursion(
    model,
    u: MarkedPoint,
    z_seq,
    table: InteractionTable | None = None,
    relation: NeighbourRelation | None = None,
    clique_size_cap: int = 12,
    check_permutations: bool = False,
) -> float:
    """Log interaction value phi(u, z) built from density ratios.

    phi(u, z) = f((z, u)) / (f(z) * prod over strict sub-multisets), with
    base case phi(u, empty) = f((u)) / f(empty), and 1 (log 0) off cliques.
    Memoised in ``table`` when given.  A zero denominator under a positive
    numerator exposes a non-hereditary or non-Markov model and raises
    ModelContractError.
    """
    relation = relation or model.relation
    if table is None:
        table = InteractionTable(relation_name=relation.name)
    zc = _canonical(z_seq)
    if len(zc) > clique_size_cap:
        raise CapacityError(
            f"interaction set of size {len(zc)} exceeds the cap {clique_size_cap} "
            f"(cost grows as 2^n)"
        )
    value = _phi(model, relation, u, zc, table, clique_size_cap)
    if check_permutations and len(zc) > 1:
        import itertools

        base = _ratio_log(model, zc, u)
        for perm in itertools.permutations(zc):
            other = _ratio_log(model, tuple(perm), u)
            if not _log_close(base, other, 1e-12):
                raise ModelContractError(
                    "append ratio is not permutation invariant; the model is "
                    "not Markov for the requested relation"
                )
    return value


def _ratio_log(model, ordered, u) -> float:
    den = checked_log_density(model, PointSequence(ordered))
    num = checked_log_density(model, PointSequence(ordered + (u,)))
    if den == NEG_INF:
        return NEG_INF if num == NEG_INF else math.inf
    return num - den


def _log_close(a: float, b: float, tol: float) -> bool:
    if a == b:
        return True
    if math.isinf(a) or math.isinf(b):
        return False
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def _phi(model, relation, u, zc, table, cap) -> float:
    key = (point_key(u), tuple(point_key(p) for p in zc))
    hit = table.entries.get(key)
    if hit is not None:
        return hit
    if not is_clique(relation, u, zc):
        return 0.0
    if len(zc) == 0:
        log_empty = checked_log_density(model, PointSequence())
        if log_empty == NEG_INF:
            raise ModelContractError("the empty sequence must have positive density")
        value = checked_log_density(model, PointSequence((u,))) - log_empty
    else:
        num = checked_log_density(model, PointSequence(zc + (u,)))
        den = checked_log_density(model, PointSequence(zc))
        phi_sum = 0.0
        for sub in _distinct_submultisets(zc, strict=True):
            pv = _phi(model, relation, u, sub, table, cap)
            phi_sum += pv
            if phi_sum == NEG_INF:
                break
        denominator = NEG_INF if den == NEG_INF else den + phi_sum
        if denominator == NEG_INF:
            if num == NEG_INF:
                value = NEG_INF  # the 0/0 = 0 convention
            else:
                raise ModelContractError(
                    "zero denominator under a positive numerator: the density "
                    "is not hereditary/Markov for this relation"
                )
        else:
            value = num - denominator
            if math.isnan(value):
                raise ModelContractError(f"interaction value NaN at key {key}")
    table.entries[key] = value
    return value


def build_interaction_table(
    model,
    points,
    max_size: int,
    relation: NeighbourRelation | None = None,
    clique_size_cap: int = 12,
) -> InteractionTable:
    """Interaction values for every head in ``points`` and every clique
    multiset over ``points`` up to ``max_size`` elements."""
    import itertools

    relation = relation or model.relation
    table = InteractionTable(relation_name=relation.name)
    pts = _canonical(points)
    for head in pts:
        for size in range(0, max_size + 1):
            for combo in itertools.combinations_with_replacement(pts, size):
                if is_clique(relation, head, combo):
                    interaction_recursion(
                        model,
                        head,
                        combo,
                        table=table,
                        relation=relation,
                        clique_size_cap=clique_size_cap,
                    )
    return table


def factorised_log_density(
    table: InteractionTable,
    f_empty_log: float,
    seq: PointSequence,
    relation: NeighbourRelation,
) -> float:
    """Reassemble the log density from clique interaction terms.

    Only sub-multisets of each point's directed-neighbour multiset are
    enumerated (everything else is a non-clique contributing log 1 = 0),
    so the cost is exponential in neighbourhood size, not sequence length.
    """
    total = f_empty_log
    pts = seq.points
    for i, head in enumerate(pts):
        neighbours = _canonical(p for p in pts[:i] if relation(head, p))
        for sub in _distinct_submultisets(neighbours, strict=False):
            total += table.value(relation, head, sub)
    return total


@dataclass(frozen=True)
class MarkovReport:
    hereditary: bool
    hereditary_counterexamples: tuple
    locality_ok: bool
    max_locality_deviation: float
    locality_counterexamples: tuple
    reflexive: bool
    states_checked: int


def verify_markov(model, space, relation: NeighbourRelation | None = None, tol: float = 1e-10) -> MarkovReport:
    """Exhaustive Markov check on an enumerable space.

    Hereditary: every positive state keeps positive density under any
    one-point deletion (which propagates to all subsequences).  Locality:
    append ratios agree, to tol, across positive states presenting the
    same directed-neighbour multiset to the incoming point.  Failures are
    report content, not errors.
    """
    relation = relation or model.relation
    log_f = [checked_log_density(model, space.sequence(s)) for s in space.states]

    hered_bad = []
    for idx, state in enumerate(space.states):
        if log_f[idx] == NEG_INF or not state:
            continue
        for pos in range(len(state)):
            child = state[:pos] + state[pos + 1 :]
            if log_f[space.index_of(child)] == NEG_INF:
                hered_bad.append((state, child))
                break
        if len(hered_bad) >= 10:
            break

    reflexive = all(relation(p, p) for p in space.points())

    max_dev = 0.0
    local_bad = []
    for u in space.points():
        groups: dict[tuple, list] = {}
        for idx, state in enumerate(space.states):
            if log_f[idx] == NEG_INF:
                continue
            seq = space.sequence(state)
            nb = multiset_key(p for p in seq if relation(u, p))
            ratio = _ratio_log(model, seq.points, u)
            groups.setdefault(nb, []).append((ratio, state))
        for nb, entries in groups.items():
            ratios = [e[0] for e in entries]
            lo, hi = min(ratios), max(ratios)
            dev = _log_ratio_deviation(lo, hi)
            if dev > max_dev:
                max_dev = dev
            if dev > tol and len(local_bad) < 10:
                lo_state = min(entries)[1]
                hi_state = max(entries)[1]
                local_bad.append((u, lo_state, hi_state))

    return MarkovReport(
        hereditary=not hered_bad,
        hereditary_counterexamples=tuple(hered_bad),
        locality_ok=max_dev <= tol,
        max_locality_deviation=max_dev,
        locality_counterexamples=tuple(local_bad),
        reflexive=reflexive,
        states_checked=len(space.states),
    )


def _log_ratio_deviation(lo: float, hi: float) -> float:
    """Deviation between two log ratios on the plain-ratio scale."""
    if lo == hi:
        return 0.0
    if lo == NEG_INF or hi == math.inf or math.isinf(lo) or math.isinf(hi):
        return math.inf
    a, b = math.exp(lo), math.exp(hi)
    return abs(a - b) / max(1.0, abs(a), abs(b))


def ssi_interaction_closed_form(
    model, x: MarkedPoint, y_points, require_length_normalisation: bool = False
) -> float:
    """Closed-form log interaction for the inhibition model.

    For a non-empty distinct set y with positive admissible mass:
    1{d(x,y) > r} * exp(sum over subsets z of (-1)^{|y \\ z|} log(r_{|z|+1}/I(z)))
    where r_n is the length ratio n c_n q_n / (c_{n-1} q_{n-1}).  The
    identity with the recursive construction rests on the alternating
    binomial sum.  Without stored normalising constants the c-free ratios
    of the implemented density are used; pass
    ``require_length_normalisation=True`` to insist on the true constants
    (exact only on discrete domains) instead of that convention.
    """
    if require_length_normalisation and model.norm_constants is None:
        raise UnsupportedModeError(
            "length-normalised interaction values need per-length constants; "
            "compute them on a discrete domain or supply them on the model"
        )
    pts = _canonical(y_points)
    keys = [point_key(p) for p in pts]
    if len(set(keys)) != len(keys):
        raise ArgumentError("the closed form takes a distinct point set")
    for p in pts:
        model._check_point(p)
    model._check_point(x)
    if not pts:
        r1 = model.r_ratio(1)
        pv = model.pi.value(x.x, x.y)
        if r1 <= 0.0 or pv <= 0.0:
            return NEG_INF
        return math.log(r1 * pv)
    if model.admissible_integral(pts) <= 0.0:
        return NEG_INF
    if any(math.hypot(x.x - p.x, x.y - p.y) <= model.r for p in pts):
        return NEG_INF
    total = 0.0
    n = len(pts)
    for mask in range(1 << n):
        sub = tuple(pts[j] for j in range(n) if (mask >> j) & 1)
        sign = -1 if (n - len(sub)) % 2 else 1
        r_val = model.r_ratio(len(sub) + 1)
        if r_val <= 0.0:
            if sign > 0:
                return NEG_INF
            raise ModelContractError(
                "alternating sum hit a zero length ratio with negative sign"
            )
        i_val = model.admissible_integral(sub)
        if i_val <= 0.0:
            raise ModelContractError("admissible mass vanished on a subset")
        total += sign * (math.log(r_val) - math.log(i_val))
    return total


def _format_mark(mk: tuple) -> str:
    rank, val = mk
    if rank == 0:
        return ""
    if rank == 1:
        return f"{val:.17g}"
    return str(val)


def _format_point_key(pk: tuple) -> str:
    return f"{pk[0]:.17g}:{pk[1]:.17g}:{_format_mark(pk[2])}"


def write_interaction_table_csv(table: InteractionTable, path) -> None:
    """Emit the table as CSV: head_x, head_y, head_mark, set_key, log_phi."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["head_x", "head_y", "head_mark", "set_key", "log_phi"])
        for (head, zkey), value in sorted(table.entries.items()):
            writer.writerow(
                [
                    f"{head[0]:.17g}",
                    f"{head[1]:.17g}",
                    _format_mark(head[2]),
                    ";".join(_format_point_key(pk) for pk in zkey),
                    f"{value:.17g}",
                ]
            )
