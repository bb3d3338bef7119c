"""Dynamical entropy functionals, sequences, and rate estimation.

Four entropy notions are computed from a system and a partition of unity,
all reducing to the classical dynamical entropy on sharp partitions of
deterministic dynamics but ordered strictly on unsharp or stochastic input:

* ``hud``: mean conditional information of states about outcome words,
* ``mak``: von Neumann entropy of the Gram-matrix state of the refinement,
* ``afl``: von Neumann entropy of the nested-evolution operational state,
* ``kow``: Shannon entropy of the outcome word distribution.

At every depth N the chain hud <= mak, hud <= afl <= kow holds; kow - afl
measures decoherence lost to the diagonal, mak - hud is a Holevo-type gap.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass

import numpy as np

from ._errors import CapExceededError, InequalityViolationError, ValidationError
from .decompositions import (
    DEFAULT_ENUMERATION_CAP,
    Decomposition,
    MultiDecomposition,
    entropy_defect,
    extremal_decompositions,
    multi_marginal,
    trivial_decomposition,
)
from .entropy import (
    as_prob_vector,
    eta,
    relative_entropy,
    shannon_entropy,
    von_neumann_entropy,
)
from .partitions import (
    DEFAULT_WORD_CAP,
    PartitionOfUnity,
    RefinedPartition,
    distribution,
    evolve,
    refine_afl,
    sharp_partition,
)
from .systems import StochasticSystem

DEFAULT_DIM_CAP = 2048
MI_FORM_TOL = 1e-9

__all__ = [
    "DEFAULT_DIM_CAP",
    "EntropyKind",
    "EntropySequence",
    "RateEstimate",
    "CntSearchResult",
    "SupResult",
    "mutual_information",
    "hud_functional",
    "cnt_functional",
    "cnt_onetime",
    "cnt_search",
    "rho_mak",
    "rho_afl",
    "entropy_sequence",
    "rate_estimate",
    "sup_over_sharp",
    "iter_set_partitions",
]


class EntropyKind(enum.Enum):
    HUD = "hud"
    MAK = "mak"
    AFL = "afl"
    KOW = "kow"


def _response_of(f) -> np.ndarray:
    if isinstance(f, RefinedPartition):
        return f.elements
    if isinstance(f, PartitionOfUnity):
        return f.response
    raise ValidationError(f"expected a partition, got {type(f).__name__}")


def mutual_information(mu, decomposition: Decomposition, f) -> float:
    """Information the decomposition index carries about the outcome of f.

    Computed two ways and cross-checked within 1e-9 before returning:
    as the entropy difference S(mu o f) - sum_a w_a S(mu_a o f) and as the
    weighted relative entropy sum_a w_a S(mu_a o f | mu o f).  Disagreement
    signals an inconsistent decomposition and raises.
    """
    matrix = _response_of(f)
    muv = as_prob_vector(mu, "mu")
    decomposition.check_recombines(muv)
    base = distribution(muv, f)
    s_base = shannon_entropy(base)
    outcome_rows = decomposition.components @ matrix
    row_entropies = np.sum(eta(outcome_rows), axis=1)
    weights = decomposition.weights
    difference_form = s_base - float(weights @ row_entropies)
    relative_form = 0.0
    for a in np.flatnonzero(weights > 0.0):
        rel = relative_entropy(outcome_rows[a], base)
        if math.isinf(rel):
            relative_form = math.inf
            break
        relative_form += float(weights[a]) * rel
    if abs(difference_form - relative_form) > MI_FORM_TOL:
        raise InequalityViolationError(
            "mutual information forms disagree: "
            f"difference {difference_form!r} vs relative {relative_form!r}"
        )
    return difference_form


def hud_functional(mu, f) -> float:
    """Average information outcomes carry about the underlying state.

    S(mu o f) - sum_x mu_x S(delta_x o f); equals the weighted relative
    entropy of the point outcome rows against the mean row, so it is
    non-negative and bounded by S(mu).
    """
    matrix = _response_of(f)
    muv = as_prob_vector(mu, "mu")
    if muv.shape[0] != matrix.shape[0]:
        raise ValidationError("measure and partition sizes differ")
    base = distribution(muv, f)
    point_entropies = np.sum(eta(matrix), axis=1)
    return shannon_entropy(base) - float(muv @ point_entropies)


def cnt_functional(mu, decomposition: MultiDecomposition, partitions) -> float:
    """Decomposition functional: marginal information minus entropy defect.

    sum_n I(marginal_n; partitions[n]) - (sum_n S(marginal weights) - S(weights)).
    The trivial decomposition gives exactly 0; the supremum over all
    decompositions defines the multi-time entropy of the partition family.
    """
    parts = list(partitions)
    if len(parts) != decomposition.arity:
        raise ValidationError(
            f"{len(parts)} partitions for a {decomposition.arity}-index decomposition"
        )
    muv = as_prob_vector(mu, "mu")
    decomposition.as_decomposition().check_recombines(muv)
    total = 0.0
    for axis, part in enumerate(parts):
        total += mutual_information(muv, multi_marginal(decomposition, axis), part)
    return total - entropy_defect(decomposition)


def cnt_onetime(mu, f, *, brute_force: bool = False, cap: int = DEFAULT_ENUMERATION_CAP) -> float:
    """One-time decomposition entropy of a single partition.

    The supremum over decompositions is attained at extremal ones and has
    the closed form hud_functional(mu, f).  With ``brute_force=True`` the
    maximum over all extremal decompositions is computed explicitly and
    must agree with the closed form within 1e-9, else this raises.
    """
    closed = hud_functional(mu, f)
    if brute_force:
        muv = as_prob_vector(mu, "mu")
        best = 0.0
        for _, dec in extremal_decompositions(muv, muv.shape[0], cap=cap):
            best = max(best, mutual_information(muv, dec, f))
        if abs(best - closed) > MI_FORM_TOL:
            raise InequalityViolationError(
                f"extremal maximum {best!r} does not meet the closed form {closed!r}"
            )
    return closed


@dataclass(eq=False)
class CntSearchResult:
    """Outcome of a decomposition search for the two-time functional."""

    best_value: float
    witness: MultiDecomposition
    witness_label: str
    negative_identifications: int
    identifications: int
    random_trials: int

    @property
    def evaluations(self) -> int:
        return 1 + self.identifications + self.random_trials


def _identification_decomposition(mu, assignments, sizes) -> MultiDecomposition:
    """Multi-index decomposition from one outcome map per time index.

    The joint weight of a multi-index is the mass of the intersection of
    the level sets; components are normalized restrictions of mu.  Indices
    with zero mass keep weight 0 and carry mu as a placeholder component.
    """
    n = mu.shape[0]
    flat = np.zeros(n, dtype=int)
    for a, size in zip(assignments, sizes):
        flat = flat * size + np.asarray(a, dtype=int)
    total = int(np.prod(sizes))
    weights = np.bincount(flat, weights=mu, minlength=total)
    components = np.tile(mu, (total, 1))
    occupied = np.flatnonzero(weights > 0.0)
    for c in occupied:
        restriction = np.where(flat == c, mu, 0.0)
        components[c] = restriction / weights[c]
    return MultiDecomposition(tuple(sizes), weights / weights.sum(), components)


def cnt_search(
    system: StochasticSystem,
    f: PartitionOfUnity,
    g: PartitionOfUnity | None = None,
    *,
    times: int = 2,
    budget: int = 200,
    seed: int = 0,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> CntSearchResult:
    """Search decompositions for the multi-time functional of (f, g).

    The second partition defaults to the evolved copy of the first.  Three
    candidate families are scanned deterministically: the trivial
    decomposition, every identification decomposition (one outcome map per
    time index, alphabet size = number of states), and ``budget`` random
    density decompositions drawn from a seeded generator.  Because the
    functional is not concave for two or more times, identification values
    can be negative; the search reports how many were.
    """
    if times < 1:
        raise ValidationError("times must be >= 1")
    if budget < 0:
        raise ValidationError("budget must be >= 0")
    if times == 1:
        parts = [f]
    elif times == 2:
        parts = [f, g if g is not None else evolve(system, f)]
    else:
        raise ValidationError("only one- and two-time searches are supported")
    for p in parts:
        if p.n_states != system.n_states:
            raise ValidationError("partition does not match the system's state count")
    mu = system.stationary
    n = system.n_states
    sizes = (n,) * times

    best_value = cnt_functional(mu, trivial_decomposition(mu, times), parts)
    best_witness = trivial_decomposition(mu, times)
    best_label = "trivial"

    map_count = n ** (n * times)
    if map_count > cap:
        raise CapExceededError(
            f"identification enumeration would visit {map_count} map tuples, cap is {cap}"
        )
    negative = 0
    identifications = 0
    single_maps = list(itertools.product(range(n), repeat=n))
    for assignments in itertools.product(single_maps, repeat=times):
        dec = _identification_decomposition(mu, assignments, sizes)
        value = cnt_functional(mu, dec, parts)
        identifications += 1
        if value < -MI_FORM_TOL:
            negative += 1
        if value > best_value:
            best_value, best_witness, best_label = value, dec, f"identification:{assignments}"

    rng = np.random.default_rng(np.random.SeedSequence(seed))
    total = int(np.prod(sizes))
    for trial in range(budget):
        response = rng.dirichlet(np.ones(total), size=n)
        weights = mu @ response
        components = (mu[None, :] * response.T) / weights[:, None]
        dec = MultiDecomposition(sizes, weights / weights.sum(), components)
        value = cnt_functional(mu, dec, parts)
        if value > best_value:
            best_value, best_witness, best_label = value, dec, f"random:{trial}"

    return CntSearchResult(
        best_value=best_value,
        witness=best_witness,
        witness_label=best_label,
        negative_identifications=negative,
        identifications=identifications,
        random_trials=budget,
    )


def rho_mak(mu, f, *, dim_cap: int = DEFAULT_DIM_CAP) -> np.ndarray:
    """Gram-matrix state of a partition under mu.

    rho[k, l] = sum_x mu_x sqrt(f_k(x) f_l(x)): positive semidefinite with
    unit trace, diagonal equal to the outcome distribution.
    """
    matrix = _response_of(f)
    muv = as_prob_vector(mu, "mu")
    if muv.shape[0] != matrix.shape[0]:
        raise ValidationError("measure and partition sizes differ")
    k = matrix.shape[1]
    if k > dim_cap:
        raise CapExceededError(f"Gram matrix would be {k} x {k}, cap is {dim_cap}")
    roots = np.sqrt(matrix)
    rho = roots.T @ (muv[:, None] * roots)
    return (rho + rho.T) / 2.0


def rho_afl(
    system: StochasticSystem,
    f: PartitionOfUnity,
    depth: int,
    *,
    dim_cap: int = DEFAULT_DIM_CAP,
) -> np.ndarray:
    """Operational state of depth-N nested measurement.

    rho[w, v] = mu( sqrt(f_{w0} f_{v0}) * theta( sqrt(f_{w1} f_{v1}) *
    theta( ... ))) over word pairs.  For sharp partitions all off-diagonal
    square roots vanish, so the state is the diagonal word distribution and
    the pair recursion is skipped.
    """
    if f.n_states != system.n_states:
        raise ValidationError("partition does not match the system's state count")
    if depth < 1:
        raise ValidationError("depth must be >= 1")
    n_words = f.n_outcomes**depth
    if n_words > dim_cap:
        raise CapExceededError(f"state would be {n_words} x {n_words}, cap is {dim_cap}")
    if f.is_sharp():
        words = distribution(
            system.stationary, refine_afl(system, f, depth, word_cap=dim_cap)
        )
        return np.diag(words)
    k = f.n_outcomes
    pair_roots = np.sqrt(f.response[:, :, None] * f.response[:, None, :])
    grams = pair_roots
    for _ in range(depth - 1):
        inner = np.einsum("xy,yab->xab", system.transition, grams)
        side = grams.shape[1]
        grams = (
            pair_roots[:, :, None, :, None] * inner[:, None, :, None, :]
        ).reshape(system.n_states, k * side, k * side)
    rho = np.einsum("x,xab->ab", system.stationary, grams)
    return (rho + rho.T) / 2.0


@dataclass(eq=False)
class EntropySequence:
    """Finite-depth entropy values s_1, ..., s_N of one entropy kind.

    ``truncated_at`` records the first depth whose computation hit a
    resource cap; values stop just before it.  Increments use the s_0 = 0
    convention, so the first increment equals the first value.
    """

    kind: EntropyKind
    values: np.ndarray
    truncated_at: int | None = None

    def __post_init__(self):
        arr = np.array(self.values, dtype=float)
        if arr.ndim != 1:
            raise ValidationError("sequence values must be one-dimensional")
        if arr.size and (not np.all(np.isfinite(arr)) or np.any(arr < -MI_FORM_TOL)):
            raise ValidationError("sequence values must be finite and non-negative")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def n_max(self) -> int:
        return self.values.shape[0]

    @property
    def increments(self) -> np.ndarray:
        return np.diff(self.values, prepend=0.0)

    @property
    def ratios(self) -> np.ndarray:
        return self.values / np.arange(1, self.values.shape[0] + 1)


def _sequence_value(
    system: StochasticSystem,
    f: PartitionOfUnity,
    kind: EntropyKind,
    depth: int,
    word_cap: int,
    dim_cap: int,
) -> float:
    if kind is EntropyKind.HUD:
        return hud_functional(
            system.stationary, refine_afl(system, f, depth, word_cap=word_cap)
        )
    if kind is EntropyKind.MAK:
        refined = refine_afl(system, f, depth, word_cap=word_cap)
        return von_neumann_entropy(rho_mak(system.stationary, refined, dim_cap=dim_cap))
    if kind is EntropyKind.AFL:
        return von_neumann_entropy(rho_afl(system, f, depth, dim_cap=dim_cap))
    if kind is EntropyKind.KOW:
        refined = refine_afl(system, f, depth, word_cap=word_cap)
        return shannon_entropy(distribution(system.stationary, refined))
    raise ValidationError(f"unknown entropy kind {kind!r}")


def entropy_sequence(
    system: StochasticSystem,
    f: PartitionOfUnity,
    kind: EntropyKind,
    n_max: int,
    *,
    word_cap: int = DEFAULT_WORD_CAP,
    dim_cap: int = DEFAULT_DIM_CAP,
) -> EntropySequence:
    """Entropy values of one kind for depths 1..n_max, stopping at caps.

    The word-distribution and operational-state kinds are nondecreasing in
    depth; a decrease beyond 1e-9 would mean an internal fault and raises.
    """
    if n_max < 1:
        raise ValidationError("n_max must be >= 1")
    values: list[float] = []
    truncated_at: int | None = None
    for depth in range(1, n_max + 1):
        try:
            values.append(_sequence_value(system, f, kind, depth, word_cap, dim_cap))
        except CapExceededError:
            truncated_at = depth
            break
    if kind in (EntropyKind.AFL, EntropyKind.KOW):
        for i in range(1, len(values)):
            if values[i] < values[i - 1] - MI_FORM_TOL:
                raise InequalityViolationError(
                    f"{kind.value} sequence decreased at depth {i + 1}: "
                    f"{values[i - 1]!r} -> {values[i]!r}"
                )
    return EntropySequence(kind=kind, values=np.asarray(values), truncated_at=truncated_at)


@dataclass(frozen=True)
class RateEstimate:
    """Tail-based entropy rate estimates from a finite sequence."""

    kind: EntropyKind
    depth: int
    last_increment: float
    last_ratio: float


def rate_estimate(sequence: EntropySequence) -> RateEstimate:
    """Estimate the asymptotic rate from the tail of a sequence.

    Reports both the last increment s_N - s_{N-1} and the last ratio
    s_N / N; they agree in the limit but differ in finite-size bias.
    Requires at least two values.
    """
    values = sequence.values
    if values.shape[0] < 2:
        raise ValidationError("need at least two sequence values to estimate a rate")
    n = values.shape[0]
    return RateEstimate(
        kind=sequence.kind,
        depth=n,
        last_increment=float(values[-1] - values[-2]),
        last_ratio=float(values[-1] / n),
    )


def iter_set_partitions(n: int, max_cells: int | None = None):
    """Iterate set partitions of range(n) in canonical order.

    Canonical form: cells sorted internally, listed by smallest member;
    generation uses restricted growth strings, so the first partition is
    the single-cell one and the last is the partition into singletons.
    """
    if n < 1:
        raise ValidationError("need at least one state")
    assignment = [0] * n
    bound = [0] * n
    while True:
        n_cells = bound[n - 1] + 1
        if max_cells is None or n_cells <= max_cells:
            cells = [[] for _ in range(n_cells)]
            for x, c in enumerate(assignment):
                cells[c].append(x)
            yield tuple(tuple(cell) for cell in cells)
        i = n - 1
        while i > 0 and assignment[i] == bound[i - 1] + 1:
            i -= 1
        if i == 0:
            return
        assignment[i] += 1
        bound[i] = max(bound[i - 1], assignment[i])
        for j in range(i + 1, n):
            assignment[j] = 0
            bound[j] = bound[i]


@dataclass(eq=False)
class SupResult:
    """Winning sharp partition of a rate-maximization sweep."""

    cells: tuple[tuple[int, ...], ...]
    partition: PartitionOfUnity
    estimate: RateEstimate
    candidates: int


MAX_EXHAUSTIVE_STATES = 8


def sup_over_sharp(
    system: StochasticSystem,
    kind: EntropyKind,
    n_max: int,
    *,
    cell_budget: int | None = None,
    word_cap: int = DEFAULT_WORD_CAP,
    dim_cap: int = DEFAULT_DIM_CAP,
) -> SupResult:
    """Maximize the rate estimate over all sharp partitions of the states.

    Exhaustive over set partitions (feasible up to 8 states; 4140
    candidates at 8).  ``cell_budget`` restricts the number of cells.  The
    winner is the largest last-increment estimate; ties within 1e-12 go to
    the lexicographically smallest canonical cell list, so results are
    reproducible.
    """
    n = system.n_states
    if n > MAX_EXHAUSTIVE_STATES:
        raise ValidationError(
            f"exhaustive sweep supports at most {MAX_EXHAUSTIVE_STATES} states, got {n}"
        )
    if n_max < 2:
        raise ValidationError("n_max must be >= 2 so a rate can be estimated")
    best: SupResult | None = None
    candidates = 0
    for cells in iter_set_partitions(n, cell_budget):
        part = sharp_partition(cells, n)
        sequence = entropy_sequence(
            system, part, kind, n_max, word_cap=word_cap, dim_cap=dim_cap
        )
        if sequence.n_max < 2:
            continue
        estimate = rate_estimate(sequence)
        candidates += 1
        if (
            best is None
            or estimate.last_increment > best.estimate.last_increment + 1e-12
        ):
            best = SupResult(cells, part, estimate, 0)
        elif (
            abs(estimate.last_increment - best.estimate.last_increment) <= 1e-12
            and cells < best.cells
        ):
            best = SupResult(cells, part, estimate, 0)
    if best is None:
        raise ValidationError("no sharp partition produced a rateable sequence")
    best.candidates = candidates
    return best
