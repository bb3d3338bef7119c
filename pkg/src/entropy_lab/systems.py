"""Finite-state stochastic dynamical systems.

A system bundles state labels, a row-stochastic transition matrix P
(``transition[x, y]`` is the probability of jumping from x to y) and a
strictly positive stationary measure.  The dual action on observables is
``theta_apply``: f maps to P @ f, a positive unital map that preserves the
stationary measure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._errors import ValidationError
from .entropy import SUM_TOL, as_prob_vector, as_stochastic_matrix

STATIONARY_TOL = 1e-10
POWER_ITER_MAX = 10**6

__all__ = [
    "StochasticSystem",
    "stationary_measure",
    "make_markov",
    "make_bernoulli",
    "make_deterministic",
    "theta_apply",
]


@dataclass(frozen=True, eq=False)
class StochasticSystem:
    """Immutable (states, transition, stationary) triple.

    Rows of ``transition`` are normalized to sum to 1 exactly and
    ``stationary`` to total 1 exactly, so unitality and measure invariance
    hold to machine precision, not just to validation tolerance.
    """

    states: tuple[str, ...]
    transition: np.ndarray
    stationary: np.ndarray

    @property
    def n_states(self) -> int:
        return len(self.states)

    def state_index(self, label: str) -> int:
        try:
            return self.states.index(label)
        except ValueError:
            raise ValidationError(f"unknown state label {label!r}") from None


def _state_labels(states, n: int) -> tuple[str, ...]:
    if states is None:
        return tuple(f"s{i}" for i in range(n))
    if isinstance(states, int):
        if states != n:
            raise ValidationError(f"state count {states} does not match matrix size {n}")
        return tuple(f"s{i}" for i in range(n))
    labels = tuple(str(s) for s in states)
    if len(labels) != n:
        raise ValidationError(f"{len(labels)} labels for {n} states")
    if len(set(labels)) != len(labels):
        raise ValidationError("state labels must be distinct")
    return labels


def stationary_measure(
    transition,
    *,
    tol: float = 1e-12,
    max_iter: int = POWER_ITER_MAX,
) -> np.ndarray:
    """Stationary probability vector of a row-stochastic matrix.

    Power iteration started from the uniform vector; the iteration step
    equals the invariance residual, so convergence below ``tol`` certifies
    |mu P - mu| <= tol directly.  Raises on non-convergence (periodic
    chains whose average is not reached) and on limits with (near-)zero
    entries, which signal a reducible chain; supply the measure explicitly
    in those cases.
    """
    p = as_stochastic_matrix(transition, "transition")
    n = p.shape[0]
    if p.shape[1] != n:
        raise ValidationError(f"transition must be square, got {p.shape}")
    mu = np.full(n, 1.0 / n)
    gap = np.inf
    for _ in range(max_iter):
        nxt = mu @ p
        gap = float(np.max(np.abs(nxt - mu)))
        mu = nxt
        if gap <= tol:
            break
    else:
        raise ValidationError(
            f"power iteration did not converge within {max_iter} steps "
            f"(last step {gap:.3e}); the chain may be periodic"
        )
    np.clip(mu, 0.0, None, out=mu)
    mu /= mu.sum()
    if np.any(mu < 1e-12):
        raise ValidationError(
            "stationary measure has a (near-)zero entry; the chain is reducible, "
            "pass the intended measure explicitly"
        )
    residual = float(np.max(np.abs(mu @ p - mu)))
    if residual > STATIONARY_TOL:
        raise ValidationError(f"stationary residual {residual:.3e} exceeds {STATIONARY_TOL:.0e}")
    return mu


def make_markov(states, transition, stationary=None) -> StochasticSystem:
    """Build a system from a transition matrix and optional stationary measure.

    Parameters
    ----------
    states:
        Sequence of distinct labels, an integer state count (labels are then
        generated), or None.
    transition:
        Square row-stochastic matrix, rows summing to 1 within 1e-9.
    stationary:
        Probability vector with strictly positive entries, invariant under
        the transition within 1e-9.  Computed by power iteration if omitted.
    """
    p = as_stochastic_matrix(transition, "transition")
    n = p.shape[0]
    if p.shape[1] != n:
        raise ValidationError(f"transition must be square, got {p.shape}")
    labels = _state_labels(states, n)
    # Normalize rows exactly so theta_apply is unital to machine precision.
    p = p / p.sum(axis=1, keepdims=True)
    if stationary is None:
        mu = stationary_measure(p)
    else:
        mu = as_prob_vector(stationary, "stationary")
        if mu.shape[0] != n:
            raise ValidationError(f"stationary has {mu.shape[0]} entries for {n} states")
        residual = float(np.max(np.abs(mu @ p - mu)))
        if residual > SUM_TOL:
            raise ValidationError(
                f"measure is not invariant: max |mu P - mu| = {residual:.3e} > {SUM_TOL:.0e}"
            )
    if np.any(mu <= 0.0):
        dead = [labels[i] for i in np.flatnonzero(mu <= 0.0)]
        raise ValidationError(f"states with zero stationary mass are rejected: {dead}")
    mu = mu / mu.sum()
    p.setflags(write=False)
    mu.setflags(write=False)
    return StochasticSystem(states=labels, transition=p, stationary=mu)


def make_bernoulli(probabilities, states=None) -> StochasticSystem:
    """Independent repetition of one fixed distribution: every row equals p."""
    p = as_prob_vector(probabilities, "probabilities")
    if np.any(p <= 0.0):
        raise ValidationError("independent source requires strictly positive probabilities")
    transition = np.tile(p, (p.shape[0], 1))
    return make_markov(states, transition, p)


def make_deterministic(mapping, stationary, states=None) -> StochasticSystem:
    """Deterministic dynamics from a state map.

    ``mapping[x]`` is the index the point x moves to.  The supplied measure
    must be invariant under the map within 1e-9.
    """
    idx = np.asarray(mapping, dtype=int)
    if idx.ndim != 1 or idx.size == 0:
        raise ValidationError("mapping must be a non-empty index sequence")
    n = idx.size
    if np.any(idx < 0) or np.any(idx >= n):
        raise ValidationError("mapping has image indices outside the state range")
    transition = np.zeros((n, n))
    transition[np.arange(n), idx] = 1.0
    return make_markov(states, transition, stationary)


def theta_apply(system: StochasticSystem, f) -> np.ndarray:
    """One-step dual evolution of an observable: (theta f)(x) = sum_y P[x,y] f(y)."""
    arr = np.asarray(f, dtype=float)
    if arr.shape != (system.n_states,):
        raise ValidationError(
            f"observable has shape {arr.shape}, expected ({system.n_states},)"
        )
    if not np.all(np.isfinite(arr)):
        raise ValidationError("observable has non-finite entries")
    return system.transition @ arr
