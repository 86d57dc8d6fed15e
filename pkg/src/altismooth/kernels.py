"""Squared-exponential correlation kernel and its spectral machinery.

The smoothness prior on each gate's M-sample evolution uses the correlation
matrix C(m, m') = exp(-(m - m')^2 / lengthscale^2) plus a diagonal jitter.
All per-iteration solves reduce to diagonal shrinkage in the eigenbasis of
the inverse correlation, so the expensive factorisation happens once.

For a symmetric positive-definite matrix the SVD and the symmetric
eigendecomposition coincide; the eigendecomposition is used because it is
cheaper and returns an orthonormal basis by construction.  The inverse is
never formed densely: eigenvalues of the inverse are reciprocals of the
kernel's eigenvalues.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.linalg

from .errors import NotPositiveDefiniteError

DEFAULT_LENGTHSCALE = 30.0
DEFAULT_JITTER = 1e-8


@dataclass(frozen=True)
class CorrelationMatrix:
    """Dense SE correlation matrix with its construction parameters."""

    values: np.ndarray
    lengthscale: float
    jitter: float

    @property
    def size(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class CovarianceBasis:
    """Eigenbasis of the inverse correlation (precision) matrix.

    vectors            (M x M) orthonormal eigenvectors, column i paired with
    precision_eigvals  eigenvalue i of the inverse correlation, sorted
                       descending (and therefore all positive).
    """

    vectors: np.ndarray
    precision_eigvals: np.ndarray

    @property
    def size(self) -> int:
        return self.vectors.shape[0]


def build_correlation(
    num_signals: int,
    lengthscale: float = DEFAULT_LENGTHSCALE,
    jitter: float = DEFAULT_JITTER,
) -> CorrelationMatrix:
    """Build the SE correlation matrix over sample indices 0..M-1.

    Raises NotPositiveDefiniteError when the jittered matrix still fails a
    Cholesky factorisation (jitter too small for this M/lengthscale).
    """
    if num_signals < 1:
        raise ValueError("num_signals must be >= 1")
    if lengthscale <= 0 or jitter < 0:
        raise ValueError("need lengthscale > 0 and jitter >= 0")
    idx = np.arange(num_signals, dtype=float)
    lag = idx[:, None] - idx[None, :]
    values = np.exp(-((lag / lengthscale) ** 2))
    values[np.diag_indices(num_signals)] += jitter
    try:
        np.linalg.cholesky(values)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError(
            f"correlation matrix (M={num_signals}, lengthscale={lengthscale}, "
            f"jitter={jitter}) is not positive definite"
        ) from exc
    return CorrelationMatrix(values=values, lengthscale=lengthscale, jitter=jitter)


def decompose(corr: CorrelationMatrix) -> CovarianceBasis:
    """Eigendecompose the inverse correlation matrix.

    Kernel eigenvalues below jitter/10 are floored there before
    reciprocation; those directions are already jitter-dominated and the
    floor only prevents overflow of their precision values.
    """
    eigvals, vectors = scipy.linalg.eigh(corr.values)
    if eigvals[0] <= 0:
        raise NotPositiveDefiniteError(
            f"eigendecomposition found non-positive eigenvalue {eigvals[0]}"
        )
    if corr.jitter > 0:
        eigvals = np.maximum(eigvals, corr.jitter / 10.0)
    # eigh returns ascending kernel eigenvalues, so the precision eigenvalues
    # come out descending with matching columns; no reordering needed.
    return CovarianceBasis(vectors=vectors, precision_eigvals=1.0 / eigvals)


def posterior_mean_fast(
    row: np.ndarray,
    noise_var: float,
    energy_var: float,
    basis: CovarianceBasis,
    coeffs: np.ndarray | None = None,
) -> np.ndarray:
    """Posterior mean of one gate's M-sample evolution by diagonal shrinkage.

    Equals the dense solve of (C^-1/energy_var + I/noise_var) s = row/noise_var.
    ``coeffs`` is the cached projection basis.vectors.T @ row; pass it when the
    caller holds it from a previous step.
    """
    if coeffs is None:
        coeffs = basis.vectors.T @ row
    filt = energy_var / (basis.precision_eigvals * noise_var + energy_var)
    return basis.vectors @ (filt * coeffs)


def prior_quadratic_form(row: np.ndarray, basis: CovarianceBasis) -> float:
    """Energy of a row under the inverse correlation: row^T C^-1 row."""
    coeffs = basis.vectors.T @ row
    value = float(np.dot(basis.precision_eigvals * coeffs, coeffs))
    return max(value, 0.0)


def _cache_name(num_signals: int, lengthscale: float, jitter: float) -> str:
    return f"basis_M{num_signals}_l{lengthscale:g}_j{jitter:g}.npz"


def save_basis(basis: CovarianceBasis, path) -> None:
    np.savez(path, vectors=basis.vectors, precision_eigvals=basis.precision_eigvals)


def load_basis(path) -> CovarianceBasis:
    with np.load(path) as data:
        return CovarianceBasis(
            vectors=data["vectors"], precision_eigvals=data["precision_eigvals"]
        )


def cached_basis(
    num_signals: int,
    lengthscale: float = DEFAULT_LENGTHSCALE,
    jitter: float = DEFAULT_JITTER,
    cache_dir=None,
) -> CovarianceBasis:
    """Basis for (M, lengthscale, jitter), reusing an on-disk copy if present."""
    if cache_dir is None:
        return decompose(build_correlation(num_signals, lengthscale, jitter))
    cache_dir = Path(cache_dir)
    cache_dir.mkdir(parents=True, exist_ok=True)
    path = cache_dir / _cache_name(num_signals, lengthscale, jitter)
    if path.exists():
        return load_basis(path)
    basis = decompose(build_correlation(num_signals, lengthscale, jitter))
    save_basis(basis, path)
    return basis
