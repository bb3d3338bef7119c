"""Scalar entropy functionals on probability vectors and density matrices.

Every entropy in this module is measured in nats (natural logarithm).
Unit conversion happens only at presentation boundaries, never here.

Conventions enforced throughout:

* probability vectors are 1-d float arrays, entries >= 0, total 1 within
  ``SUM_TOL``; entries in the band [-CLAMP_TOL, 0) are clamped to zero,
* stochastic matrices are row-stochastic with the same row tolerance,
* density matrices are symmetric (within ``SYMMETRY_TOL``), unit trace
  (within ``TRACE_TOL``) and positive semidefinite up to ``EIG_FLOOR``.
"""

from __future__ import annotations

import math

import numpy as np

from ._errors import ValidationError

# Tolerance ladder.  Sums of probabilities are checked loosely, symmetry
# tightly; eigenvalue floors sit in between because eigensolvers are noisier
# than sums.
SUM_TOL = 1e-9
CLAMP_TOL = 1e-12
SYMMETRY_TOL = 1e-12
TRACE_TOL = 1e-10
EIG_FLOOR = 1e-10
EIG_RESIDUAL_REL = 1e-8

__all__ = [
    "SUM_TOL",
    "CLAMP_TOL",
    "SYMMETRY_TOL",
    "TRACE_TOL",
    "EIG_FLOOR",
    "as_prob_vector",
    "as_stochastic_matrix",
    "as_density_matrix",
    "eta",
    "shannon_entropy",
    "relative_entropy",
    "symmetric_eigenvalues",
    "von_neumann_entropy",
    "diag_restrict",
    "pushforward",
]


def as_prob_vector(p, name: str = "p") -> np.ndarray:
    """Validate and return a probability vector as a fresh float array.

    Entries in [-1e-12, 0) are clamped to 0; anything more negative is an
    error, as is a total farther than 1e-9 from 1.
    """
    arr = np.array(p, dtype=float)
    if arr.ndim != 1:
        raise ValidationError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise ValidationError(f"{name} is empty")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} has non-finite entries")
    if np.any(arr < -CLAMP_TOL):
        worst = float(arr.min())
        raise ValidationError(f"{name} has negative entry {worst:.3e} below -{CLAMP_TOL:.0e}")
    np.clip(arr, 0.0, None, out=arr)
    total = float(arr.sum())
    if abs(total - 1.0) > SUM_TOL:
        raise ValidationError(f"{name} sums to {total!r}, not 1 within {SUM_TOL:.0e}")
    return arr


def as_stochastic_matrix(m, name: str = "matrix") -> np.ndarray:
    """Validate a row-stochastic matrix (rows are probability vectors)."""
    arr = np.array(m, dtype=float)
    if arr.ndim != 2:
        raise ValidationError(f"{name} must be two-dimensional, got shape {arr.shape}")
    if arr.shape[0] == 0 or arr.shape[1] == 0:
        raise ValidationError(f"{name} has a zero dimension: {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} has non-finite entries")
    if np.any(arr < -CLAMP_TOL):
        i, j = np.unravel_index(int(np.argmin(arr)), arr.shape)
        raise ValidationError(
            f"{name}[{i},{j}] = {arr[i, j]:.3e} is below -{CLAMP_TOL:.0e}"
        )
    np.clip(arr, 0.0, None, out=arr)
    sums = arr.sum(axis=1)
    bad = np.argmax(np.abs(sums - 1.0))
    if abs(sums[bad] - 1.0) > SUM_TOL:
        raise ValidationError(
            f"{name} row {int(bad)} sums to {float(sums[bad])!r}, not 1 within {SUM_TOL:.0e}"
        )
    return arr


def _check_symmetric_square(m, name: str) -> np.ndarray:
    arr = np.array(m, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValidationError(f"{name} must be square, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} has non-finite entries")
    skew = float(np.max(np.abs(arr - arr.T))) if arr.size else 0.0
    if skew > SYMMETRY_TOL:
        raise ValidationError(
            f"{name} is not symmetric: max |m - m^T| = {skew:.3e} > {SYMMETRY_TOL:.0e}"
        )
    return arr


def symmetric_eigenvalues(m, name: str = "matrix") -> np.ndarray:
    """Eigenvalues of a symmetric matrix, descending.

    Backed by LAPACK through ``numpy.linalg.eigh``.  The result is accepted
    only if every eigenpair satisfies ``|m v - w v| <= 1e-8 * |m|`` (spectral
    norm) and the eigenvalue sum matches the trace within 1e-9; otherwise a
    ValidationError is raised rather than returning silent garbage.
    """
    arr = _check_symmetric_square(m, name)
    sym = (arr + arr.T) / 2.0
    try:
        vals, vecs = np.linalg.eigh(sym)
    except np.linalg.LinAlgError as exc:
        raise ValidationError(f"eigendecomposition of {name} failed: {exc}") from exc
    scale = max(float(np.max(np.abs(vals))), 1e-300)
    residual = float(np.max(np.abs(sym @ vecs - vecs * vals)))
    if residual > EIG_RESIDUAL_REL * scale:
        raise ValidationError(
            f"eigenpair residual {residual:.3e} exceeds {EIG_RESIDUAL_REL:.0e} * |{name}|"
        )
    trace_gap = abs(float(vals.sum()) - float(np.trace(sym)))
    if trace_gap > 1e-9 * max(1.0, abs(float(np.trace(sym)))):
        raise ValidationError(
            f"eigenvalue sum deviates from trace of {name} by {trace_gap:.3e}"
        )
    return vals[::-1].copy()


def _density_spectrum(rho, name: str) -> np.ndarray:
    """Descending spectrum of a density matrix, with trace and floor checks."""
    arr = _check_symmetric_square(rho, name)
    trace = float(np.trace(arr))
    if abs(trace - 1.0) > TRACE_TOL:
        raise ValidationError(f"{name} has trace {trace!r}, not 1 within {TRACE_TOL:.0e}")
    vals = symmetric_eigenvalues(arr, name)
    if vals[-1] < -EIG_FLOOR:
        raise ValidationError(
            f"{name} has eigenvalue {float(vals[-1]):.3e} below -{EIG_FLOOR:.0e}"
        )
    return np.clip(vals, 0.0, None)


def as_density_matrix(rho, name: str = "rho") -> np.ndarray:
    """Validate a density matrix: symmetric, unit trace, spectrum >= -1e-10."""
    arr = _check_symmetric_square(rho, name)
    _density_spectrum(arr, name)
    return arr


def eta(x):
    """Entropy integrand -x log x with eta(0) = 0.

    Accepts a scalar or an array with entries in [0, 1] (a clamping band of
    1e-12 on both ends is tolerated and snapped to the boundary).
    """
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValidationError("eta: non-finite input")
    if np.any(arr < -CLAMP_TOL) or np.any(arr > 1.0 + CLAMP_TOL):
        raise ValidationError("eta: input outside [0, 1] beyond the 1e-12 band")
    arr = np.clip(arr, 0.0, 1.0)
    out = np.zeros_like(arr)
    np.multiply(arr, np.log(arr, out=np.zeros_like(arr), where=arr > 0.0), out=out)
    np.negative(out, out=out)
    if np.ndim(x) == 0:
        return float(out)
    return out


def shannon_entropy(p) -> float:
    """Shannon entropy sum(eta(p_i)) in nats."""
    arr = as_prob_vector(p, "p")
    return float(np.sum(eta(arr)))


def relative_entropy(p, q) -> float:
    """Relative entropy sum p_i log(p_i / q_i), with the 0 log 0 = 0 rule.

    Returns math.inf when p puts mass outside the support of q.
    """
    pa = as_prob_vector(p, "p")
    qa = as_prob_vector(q, "q")
    if pa.shape != qa.shape:
        raise ValidationError(f"dimension mismatch: {pa.shape} vs {qa.shape}")
    mask = pa > 0.0
    if np.any(qa[mask] == 0.0):
        return math.inf
    return float(np.sum(pa[mask] * np.log(pa[mask] / qa[mask])))


def von_neumann_entropy(rho) -> float:
    """Von Neumann entropy sum(eta(spectrum)) of a density matrix, in nats."""
    vals = _density_spectrum(rho, "rho")
    # Numerical spectra of valid densities may poke above 1 by ~1 ulp.
    return float(np.sum(eta(np.clip(vals, 0.0, 1.0))))


def diag_restrict(rho) -> np.ndarray:
    """Diagonal of a density matrix as a probability vector."""
    arr = as_density_matrix(rho)
    diag = np.diagonal(arr).copy()
    # PSD up to -1e-10 allows diagonal dips slightly past the generic clamp.
    diag[(diag < 0.0) & (diag > -EIG_FLOOR)] = 0.0
    return as_prob_vector(diag, "diag(rho)")


def pushforward(p, m) -> np.ndarray:
    """Image of a probability vector under a row-stochastic matrix: p @ m."""
    pa = as_prob_vector(p, "p")
    ma = as_stochastic_matrix(m, "m")
    if ma.shape[0] != pa.shape[0]:
        raise ValidationError(
            f"pushforward shape mismatch: p has {pa.shape[0]} entries, m has {ma.shape[0]} rows"
        )
    return as_prob_vector(pa @ ma, "p @ m")
