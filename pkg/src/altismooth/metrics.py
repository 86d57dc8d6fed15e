"""Quality criteria: reconstruction SNR and parameter error statistics.

All statistics use population (1/N) normalisation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, ShapeMismatchError

PARAM_NAMES = ("swh", "tau", "pu")


def rsnr(clean: np.ndarray, estimate: np.ndarray) -> float:
    """10*log10 of clean energy over residual energy; +inf on zero residual."""
    clean = np.asarray(clean, dtype=float)
    estimate = np.asarray(estimate, dtype=float)
    if clean.shape != estimate.shape:
        raise ShapeMismatchError(f"shapes differ: {clean.shape} vs {estimate.shape}")
    signal = float(np.sum(clean**2))
    if signal == 0.0:
        raise DegenerateInputError("clean block has zero energy")
    resid = float(np.sum((clean - estimate) ** 2))
    if resid == 0.0:
        return float("inf")
    return 10.0 * np.log10(signal / resid)


def rmse(estimates: np.ndarray, truth: np.ndarray) -> float:
    """Root mean square error of a 1-D estimate series against its truth."""
    estimates = np.asarray(estimates, dtype=float)
    truth = np.asarray(truth, dtype=float)
    if estimates.shape != truth.shape:
        raise ShapeMismatchError("estimates and truth must have equal lengths")
    return float(np.sqrt(np.mean((estimates - truth) ** 2)))


def std(estimates: np.ndarray) -> float:
    """Population standard deviation about the global mean."""
    estimates = np.asarray(estimates, dtype=float)
    if estimates.size < 2:
        raise ValueError("need at least two estimates")
    return float(np.sqrt(np.mean((estimates - estimates.mean()) ** 2)))


def std_20hz(estimates: np.ndarray, window: int = 20) -> float:
    """Standard deviation about per-window means.

    Windows are consecutive, non-overlapping, of the given length; a trailing
    partial window uses its own mean.  Deviations from all N samples are
    pooled with 1/N weight.
    """
    estimates = np.asarray(estimates, dtype=float)
    n = estimates.size
    if window < 1:
        raise ValueError("window must be >= 1")
    if n < window:
        raise ValueError(f"need at least window={window} samples, got {n}")
    groups = np.arange(n) // window
    counts = np.bincount(groups)
    means = np.bincount(groups, weights=estimates) / counts
    dev = estimates - means[groups]
    return float(np.sqrt(np.mean(dev**2)))


@dataclass
class ParamSeries:
    """Per-signal parameter estimates with optional ground truth.

    estimates and truth are (N x 3) arrays in (swh, tau, pu) column order.
    """

    estimates: np.ndarray
    truth: np.ndarray | None = None

    def __post_init__(self):
        self.estimates = np.atleast_2d(np.asarray(self.estimates, dtype=float))
        if self.estimates.shape[1] != 3:
            raise ValueError("estimates must have three columns (swh, tau, pu)")
        if self.truth is not None:
            self.truth = np.atleast_2d(np.asarray(self.truth, dtype=float))
            if self.truth.shape != self.estimates.shape:
                raise ShapeMismatchError("truth shape must match estimates")

    def __len__(self) -> int:
        return self.estimates.shape[0]

    def rmse(self, param: int) -> float:
        if self.truth is None:
            raise DegenerateInputError("rmse needs ground truth")
        return rmse(self.estimates[:, param], self.truth[:, param])

    def std(self, param: int) -> float:
        return std(self.estimates[:, param])

    def std_20hz(self, param: int, window: int = 20) -> float:
        return std_20hz(self.estimates[:, param], window)
