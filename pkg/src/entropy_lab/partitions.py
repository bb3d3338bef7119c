"""Partitions of unity (unsharp measurements) and their dynamical refinements.

A partition of unity is a finite family of non-negative observables summing
pointwise to one, stored as a response matrix: ``response[x, k]`` is the
weight outcome k receives at state x.  Sharp partitions have 0/1 responses
and are ordinary cell partitions.

Two refinement schemes over N time steps both yield one element per
length-N outcome word, encoded big-endian (the time-0 symbol is the most
significant digit):

* ``refine_mak``: products of independently evolved responses,
  element(w) = f_{w0} * theta(f_{w1}) * theta^2(f_{w2}) * ...
* ``refine_afl``: nested evolution,
  element(w) = f_{w0} * theta(f_{w1} * theta(f_{w2} * ...)).

The schemes agree at depth <= 2 and for deterministic dynamics at every
depth; they genuinely differ from depth 3 on for stochastic dynamics.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._errors import CapExceededError, ValidationError
from .entropy import CLAMP_TOL, SUM_TOL, as_prob_vector
from .systems import StochasticSystem

DEFAULT_WORD_CAP = 2**20

__all__ = [
    "DEFAULT_WORD_CAP",
    "PartitionOfUnity",
    "RefinedPartition",
    "sharp_partition",
    "uniform_unsharp",
    "join",
    "evolve",
    "refine_mak",
    "refine_afl",
    "word_code",
    "word_from_code",
    "word_probability",
    "distribution",
    "point_distribution",
    "simple_decomposition",
    "word_label",
]


def _check_response(arr: np.ndarray, n_rows_name: str = "response") -> np.ndarray:
    if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
        raise ValidationError(f"{n_rows_name} must be a non-empty 2-d array, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{n_rows_name} has non-finite entries")
    if np.any(arr < -CLAMP_TOL) or np.any(arr > 1.0 + CLAMP_TOL):
        raise ValidationError(f"{n_rows_name} entries must lie in [0, 1] up to 1e-12")
    arr = np.clip(arr, 0.0, 1.0)
    sums = arr.sum(axis=1)
    worst = int(np.argmax(np.abs(sums - 1.0)))
    if abs(sums[worst] - 1.0) > SUM_TOL:
        raise ValidationError(
            f"{n_rows_name} row {worst} sums to {float(sums[worst])!r}, not 1 within {SUM_TOL:.0e}"
        )
    return arr


@dataclass(eq=False)
class PartitionOfUnity:
    """Response matrix of an unsharp measurement, rows indexed by state."""

    response: np.ndarray
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        arr = _check_response(np.array(self.response, dtype=float))
        arr.setflags(write=False)
        object.__setattr__(self, "response", arr)
        if self.labels is None:
            object.__setattr__(self, "labels", tuple(str(k) for k in range(arr.shape[1])))
        else:
            labels = tuple(str(s) for s in self.labels)
            if len(labels) != arr.shape[1]:
                raise ValidationError(
                    f"{len(labels)} outcome labels for {arr.shape[1]} outcomes"
                )
            object.__setattr__(self, "labels", labels)

    @property
    def n_states(self) -> int:
        return self.response.shape[0]

    @property
    def n_outcomes(self) -> int:
        return self.response.shape[1]

    def is_sharp(self) -> bool:
        """True when every response value is exactly 0 or 1."""
        r = self.response
        return bool(np.all((r == 0.0) | (r == 1.0)))


def sharp_partition(cells, n_states: int, labels=None) -> PartitionOfUnity:
    """Indicator partition from disjoint covering cells of state indices."""
    seen: set[int] = set()
    cell_list = [tuple(int(x) for x in cell) for cell in cells]
    if not cell_list:
        raise ValidationError("at least one cell is required")
    for cell in cell_list:
        if not cell:
            raise ValidationError("empty cells are not allowed")
        for x in cell:
            if x < 0 or x >= n_states:
                raise ValidationError(f"state index {x} outside range(0, {n_states})")
            if x in seen:
                raise ValidationError(f"state index {x} appears in two cells")
            seen.add(x)
    if len(seen) != n_states:
        missing = sorted(set(range(n_states)) - seen)
        raise ValidationError(f"cells do not cover states {missing}")
    response = np.zeros((n_states, len(cell_list)))
    for k, cell in enumerate(cell_list):
        response[list(cell), k] = 1.0
    return PartitionOfUnity(response, labels)


def uniform_unsharp(n_states: int, n_outcomes: int) -> PartitionOfUnity:
    """Totally mixing measurement: every outcome has constant weight 1/k."""
    if n_outcomes < 1:
        raise ValidationError("need at least one outcome")
    if n_states < 1:
        raise ValidationError("need at least one state")
    return PartitionOfUnity(np.full((n_states, n_outcomes), 1.0 / n_outcomes))


def join(f: PartitionOfUnity, g: PartitionOfUnity) -> PartitionOfUnity:
    """Pointwise product partition; outcome (k, l) is stored at index k * |g| + l."""
    if f.n_states != g.n_states:
        raise ValidationError("partitions live on different state spaces")
    prod = np.einsum("xk,xl->xkl", f.response, g.response)
    labels = tuple(f"{a}.{b}" for a in f.labels for b in g.labels)
    return PartitionOfUnity(prod.reshape(f.n_states, -1), labels)


def evolve(system: StochasticSystem, f: PartitionOfUnity) -> PartitionOfUnity:
    """Apply the dual dynamics to every response column at once."""
    if f.n_states != system.n_states:
        raise ValidationError("partition does not match the system's state count")
    return PartitionOfUnity(system.transition @ f.response, f.labels)


@dataclass(eq=False)
class RefinedPartition:
    """Materialized refinement: one element column per length-``depth`` word.

    ``elements[x, word_code(w, base_outcomes)]`` is element w evaluated at
    state x.  Column order is the big-endian word code, so slicing columns
    by leading symbol is contiguous.
    """

    scheme: str
    base_outcomes: int
    depth: int
    elements: np.ndarray
    labels: tuple[str, ...] = field(repr=False, default=())

    def __post_init__(self):
        if self.scheme not in ("afl", "mak"):
            raise ValidationError(f"unknown refinement scheme {self.scheme!r}")
        if self.depth < 1:
            raise ValidationError("depth must be >= 1")
        arr = np.array(self.elements, dtype=float)
        expected = self.base_outcomes**self.depth
        if arr.ndim != 2 or arr.shape[1] != expected:
            raise ValidationError(
                f"elements must have {expected} columns, got shape {arr.shape}"
            )
        if not np.all(np.isfinite(arr)):
            raise ValidationError("elements have non-finite entries")
        if np.any(arr < -CLAMP_TOL):
            raise ValidationError("elements must be non-negative up to 1e-12")
        np.clip(arr, 0.0, None, out=arr)
        sums = arr.sum(axis=1)
        if float(np.max(np.abs(sums - 1.0))) > SUM_TOL * self.depth:
            raise ValidationError("refinement elements do not sum to one pointwise")
        arr.setflags(write=False)
        object.__setattr__(self, "elements", arr)

    @property
    def n_states(self) -> int:
        return self.elements.shape[0]

    @property
    def n_words(self) -> int:
        return self.elements.shape[1]

    def element(self, word) -> np.ndarray:
        """Element observable for an outcome word (sequence of symbols)."""
        return self.elements[:, word_code(word, self.base_outcomes, self.depth)].copy()


def word_code(word, base: int, depth: int | None = None) -> int:
    """Big-endian integer code of an outcome word; symbol 0 is most significant."""
    symbols = tuple(int(k) for k in word)
    if depth is not None and len(symbols) != depth:
        raise ValidationError(f"word {symbols} does not have length {depth}")
    if not symbols:
        raise ValidationError("empty word")
    code = 0
    for k in symbols:
        if k < 0 or k >= base:
            raise ValidationError(f"symbol {k} outside range(0, {base})")
        code = code * base + k
    return code


def word_from_code(code: int, base: int, depth: int) -> tuple[int, ...]:
    """Inverse of word_code."""
    if depth < 1:
        raise ValidationError("depth must be >= 1")
    if code < 0 or code >= base**depth:
        raise ValidationError(f"code {code} outside range(0, {base**depth})")
    out = []
    for _ in range(depth):
        out.append(code % base)
        code //= base
    return tuple(reversed(out))


def word_label(f: PartitionOfUnity, word) -> str:
    """Human-readable label of a word, built from the base outcome labels."""
    return ".".join(f.labels[int(k)] for k in word)


def _check_refine_args(system: StochasticSystem, f: PartitionOfUnity, depth: int, word_cap: int):
    if f.n_states != system.n_states:
        raise ValidationError("partition does not match the system's state count")
    if depth < 1:
        raise ValidationError("depth must be >= 1")
    n_words = f.n_outcomes**depth
    if n_words > word_cap:
        raise CapExceededError(
            f"refinement would materialize {n_words} words, cap is {word_cap}"
        )


def refine_mak(
    system: StochasticSystem,
    f: PartitionOfUnity,
    depth: int,
    *,
    word_cap: int = DEFAULT_WORD_CAP,
) -> RefinedPartition:
    """Join of the independently evolved copies f, theta(f), ..., theta^(depth-1)(f)."""
    _check_refine_args(system, f, depth, word_cap)
    n = system.n_states
    elements = f.response.copy()
    evolved = f.response
    for _ in range(depth - 1):
        evolved = system.transition @ evolved
        # Append the newest symbol as the least significant digit.
        elements = (elements[:, :, None] * evolved[:, None, :]).reshape(n, -1)
    return RefinedPartition("mak", f.n_outcomes, depth, elements)


def refine_afl(
    system: StochasticSystem,
    f: PartitionOfUnity,
    depth: int,
    *,
    word_cap: int = DEFAULT_WORD_CAP,
) -> RefinedPartition:
    """Nested refinement f ∨ theta(f ∨ theta(f ∨ ...)), one element per word."""
    _check_refine_args(system, f, depth, word_cap)
    n = system.n_states
    elements = f.response.copy()
    for _ in range(depth - 1):
        # Prepend the newest symbol: element(k0 w) = f_{k0} * theta(element(w)).
        inner = system.transition @ elements
        elements = (f.response[:, :, None] * inner[:, None, :]).reshape(n, -1)
    return RefinedPartition("afl", f.n_outcomes, depth, elements)


def word_probability(system: StochasticSystem, f: PartitionOfUnity, word) -> float:
    """Stationary probability of one outcome word under nested refinement.

    Evaluates mu(f_{k0} * theta(f_{k1} * theta(...))) right to left in
    O(depth * n^2) without materializing the full refinement.
    """
    if f.n_states != system.n_states:
        raise ValidationError("partition does not match the system's state count")
    symbols = tuple(int(k) for k in word)
    if not symbols:
        raise ValidationError("empty word")
    for k in symbols:
        if k < 0 or k >= f.n_outcomes:
            raise ValidationError(f"symbol {k} outside range(0, {f.n_outcomes})")
    g = f.response[:, symbols[-1]].copy()
    for k in reversed(symbols[:-1]):
        g = f.response[:, k] * (system.transition @ g)
    return float(system.stationary @ g)


def distribution(mu, f) -> np.ndarray:
    """Outcome distribution mu(f_k) of a partition or refinement under mu."""
    matrix = f.elements if isinstance(f, RefinedPartition) else f.response
    muv = as_prob_vector(mu, "mu")
    if muv.shape[0] != matrix.shape[0]:
        raise ValidationError("measure and partition sizes differ")
    return as_prob_vector(muv @ matrix, "outcome distribution")


def point_distribution(f, x: int) -> np.ndarray:
    """Outcome distribution of a single state: row x of the response matrix."""
    matrix = f.elements if isinstance(f, RefinedPartition) else f.response
    if x < 0 or x >= matrix.shape[0]:
        raise ValidationError(f"state index {x} outside range(0, {matrix.shape[0]})")
    return as_prob_vector(matrix[x], f"row {x}")


def simple_decomposition(f: PartitionOfUnity):
    """Factor a partition through its distinct rows.

    Returns ``(cells, kernel)`` where ``cells`` groups state indices with
    identical response rows and ``kernel`` stacks the distinct rows, so
    ``response[x] == kernel[cell_of_x]`` exactly.  This is the minimal
    classical channel the measurement factors through.
    """
    rows, inverse = np.unique(f.response, axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    cells = tuple(
        tuple(int(x) for x in np.flatnonzero(inverse == c)) for c in range(rows.shape[0])
    )
    return cells, rows.copy()
