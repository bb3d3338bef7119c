"""Convex decompositions of a probability measure.

A decomposition writes mu as sum_a weights[a] * components[a], each
component itself a probability vector.  Multi-index decompositions carry a
product index; their marginals are ordinary decompositions and the entropy
defect measures how far the weight tensor is from a product of its
marginals.

Components whose weight falls below ``PRUNE_TOL`` are dropped everywhere:
they contribute nothing to any entropy (eta is continuous at 0) and keeping
them would force divisions by ~0 when normalizing.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from ._errors import CapExceededError, ValidationError
from .entropy import SUM_TOL, as_prob_vector, shannon_entropy

PRUNE_TOL = 1e-15
DEFAULT_ENUMERATION_CAP = 10**6

__all__ = [
    "PRUNE_TOL",
    "DEFAULT_ENUMERATION_CAP",
    "Decomposition",
    "MultiDecomposition",
    "trivial_decomposition",
    "from_densities",
    "to_densities",
    "multi_marginal",
    "extremal_decompositions",
    "entropy_defect",
]


@dataclass(eq=False)
class Decomposition:
    """Weights and component measures of a finite convex decomposition."""

    weights: np.ndarray
    components: np.ndarray

    def __post_init__(self):
        w = as_prob_vector(self.weights, "weights")
        c = np.array(self.components, dtype=float)
        if c.ndim != 2 or c.shape[0] != w.shape[0]:
            raise ValidationError(
                f"components must be ({w.shape[0]}, n_states), got {c.shape}"
            )
        for a in range(c.shape[0]):
            c[a] = as_prob_vector(c[a], f"component {a}")
        w.setflags(write=False)
        c.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "components", c)

    @property
    def n_components(self) -> int:
        return self.weights.shape[0]

    @property
    def n_states(self) -> int:
        return self.components.shape[1]

    def mixture(self) -> np.ndarray:
        """The recombined measure sum_a weights[a] * components[a]."""
        return self.weights @ self.components

    def check_recombines(self, mu, tol: float = SUM_TOL) -> None:
        """Raise unless the decomposition reassembles mu within tol."""
        target = as_prob_vector(mu, "mu")
        if target.shape[0] != self.n_states:
            raise ValidationError("measure dimension does not match components")
        gap = float(np.max(np.abs(self.mixture() - target)))
        if gap > tol:
            raise ValidationError(
                f"decomposition recombines to the wrong measure: max gap {gap:.3e} > {tol:.0e}"
            )


@dataclass(eq=False)
class MultiDecomposition:
    """Decomposition indexed by a product of finite index sets.

    ``weights`` and ``components`` are flat over the product index in
    C order (last index fastest), with ``index_sizes`` recording the shape.
    """

    index_sizes: tuple[int, ...]
    weights: np.ndarray
    components: np.ndarray

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.index_sizes)
        if not sizes or any(s < 1 for s in sizes):
            raise ValidationError(f"index sizes must be positive, got {sizes}")
        total = int(np.prod(sizes))
        w = np.array(self.weights, dtype=float)
        if w.shape != (total,):
            raise ValidationError(f"weights must have shape ({total},), got {w.shape}")
        flat = Decomposition(w, self.components)
        object.__setattr__(self, "index_sizes", sizes)
        object.__setattr__(self, "weights", flat.weights)
        object.__setattr__(self, "components", flat.components)

    @property
    def arity(self) -> int:
        return len(self.index_sizes)

    @property
    def n_states(self) -> int:
        return self.components.shape[1]

    def as_decomposition(self) -> Decomposition:
        return Decomposition(self.weights, self.components)

    def mixture(self) -> np.ndarray:
        return self.weights @ self.components


def trivial_decomposition(mu, arity: int = 1) -> MultiDecomposition:
    """Single-component decomposition mu = 1 * mu with all index sizes 1."""
    if arity < 1:
        raise ValidationError("arity must be >= 1")
    muv = as_prob_vector(mu, "mu")
    return MultiDecomposition((1,) * arity, np.ones(1), muv[None, :])


def from_densities(mu, f) -> Decomposition:
    """Decomposition induced by a partition of unity.

    Component a is mu conditioned on response column a:
    weights[a] = mu(f_a), components[a] = mu * f_a / mu(f_a).
    Outcomes with weight below PRUNE_TOL are dropped.
    """
    from .partitions import PartitionOfUnity  # local import, avoids a cycle

    if not isinstance(f, PartitionOfUnity):
        f = PartitionOfUnity(f)
    muv = as_prob_vector(mu, "mu")
    if muv.shape[0] != f.n_states:
        raise ValidationError("measure and partition sizes differ")
    weights = muv @ f.response
    keep = np.flatnonzero(weights > PRUNE_TOL)
    if keep.size == 0:
        raise ValidationError("every outcome has zero mass under mu")
    weights = weights[keep]
    components = (muv[None, :] * f.response.T[keep]) / weights[:, None]
    return Decomposition(weights / weights.sum(), components)


def to_densities(decomposition: Decomposition, mu):
    """Inverse of from_densities where mu is strictly positive.

    Returns the partition of unity with columns
    g_a(x) = weights[a] * components[a, x] / mu(x).
    """
    from .partitions import PartitionOfUnity

    muv = as_prob_vector(mu, "mu")
    if np.any(muv <= 0.0):
        raise ValidationError("densities require a strictly positive measure")
    decomposition.check_recombines(muv)
    response = (decomposition.weights[:, None] * decomposition.components / muv[None, :]).T
    return PartitionOfUnity(response)


def multi_marginal(decomposition: MultiDecomposition, axis: int) -> Decomposition:
    """Marginal decomposition along one index axis (0-based).

    Marginal weights sum the weight tensor over all other axes; marginal
    components are the weight-averaged components, renormalized.  Indices
    whose marginal weight falls below PRUNE_TOL are dropped.
    """
    arity = decomposition.arity
    if axis < 0 or axis >= arity:
        raise ValidationError(f"axis {axis} outside range(0, {arity})")
    sizes = decomposition.index_sizes
    w = decomposition.weights.reshape(sizes)
    wc = (decomposition.weights[:, None] * decomposition.components).reshape(
        sizes + (decomposition.n_states,)
    )
    other = tuple(i for i in range(arity) if i != axis)
    marg_w = w.sum(axis=other) if other else w.copy()
    marg_wc = wc.sum(axis=other) if other else wc.copy()
    keep = np.flatnonzero(marg_w > PRUNE_TOL)
    if keep.size == 0:
        raise ValidationError("marginal lost all its mass")
    marg_w = marg_w[keep]
    components = marg_wc[keep] / marg_w[:, None]
    return Decomposition(marg_w / marg_w.sum(), components)


def entropy_defect(decomposition: MultiDecomposition) -> float:
    """Shannon entropy gap sum_n S(marginal weights) - S(joint weights).

    Zero exactly when the weight tensor is a product measure; the joint
    entropy never exceeds the sum of its marginals, so the defect is >= 0
    up to floating point noise.
    """
    sizes = decomposition.index_sizes
    w = decomposition.weights.reshape(sizes)
    total = 0.0
    for axis in range(len(sizes)):
        other = tuple(i for i in range(len(sizes)) if i != axis)
        marg = w.sum(axis=other) if other else w
        total += shannon_entropy(np.ravel(marg))
    return total - shannon_entropy(decomposition.weights)


def extremal_decompositions(mu, n_outcomes: int, *, cap: int = DEFAULT_ENUMERATION_CAP):
    """Iterate the decompositions induced by all maps states -> outcomes.

    Each map assigns every state one outcome; the decomposition restricts mu
    to the level sets.  These are exactly the extreme points among the
    decompositions coarser than the point decomposition.  Yields
    ``(assignment, Decomposition)`` pairs; empty level sets are pruned.
    Raises CapExceededError if n_outcomes ** n_states exceeds ``cap``.
    """
    muv = as_prob_vector(mu, "mu")
    n = muv.shape[0]
    if n_outcomes < 1:
        raise ValidationError("need at least one outcome")
    total = n_outcomes**n
    if total > cap:
        raise CapExceededError(
            f"extremal enumeration would visit {total} maps, cap is {cap}"
        )
    for assignment in itertools.product(range(n_outcomes), repeat=n):
        idx = np.asarray(assignment)
        weights = np.bincount(idx, weights=muv, minlength=n_outcomes)
        keep = np.flatnonzero(weights > PRUNE_TOL)
        components = np.where(idx[None, :] == keep[:, None], muv[None, :], 0.0)
        components /= weights[keep, None]
        yield assignment, Decomposition(weights[keep] / weights[keep].sum(), components)
