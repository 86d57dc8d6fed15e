"""Denoising of smooth successive-waveform tracks, with Brown-model tools.

The package bundles:

* a Brown ocean-return waveform model with analytic jacobian (``brown``),
* synthetic track and speckle-noise generation (``simulate``),
* a coordinate-descent MAP denoiser with chain-smoothed per-gate noise and
  energy variances (``solver``, ``gmrf``, ``kernels``),
* least-squares retracking and an SVD-truncation baseline (``retrack``),
* quality metrics (``metrics``) and benchmark suites (``bench``),
* block/trajectory file formats and run manifests (``blockio``),
* the ``altismooth`` command-line front end (``cli``).
"""

__version__ = "0.1.0"

from .brown import (
    BrownConstants,
    BrownParams,
    brown_jacobian,
    brown_waveform,
    gates_to_meters,
    jason2_like,
    load_constants,
    meters_to_gates,
    sigma_c_sq,
    waveform_block,
)
from .errors import (
    AltismoothError,
    BadRangeError,
    DegenerateInputError,
    DivergedError,
    NonFiniteError,
    NotPositiveDefiniteError,
    ShapeMismatchError,
)
from .gmrf import EnergyState, NoiseState, VarianceChain
from .kernels import (
    CorrelationMatrix,
    CovarianceBasis,
    build_correlation,
    decompose,
    posterior_mean_fast,
    prior_quadratic_form,
)
from .metrics import ParamSeries, rmse, rsnr, std, std_20hz
from .retrack import FitResult, fit_block, ls_fit, svd_filter, svd_filter_stream
from .simulate import (
    NoiseSpec,
    ParamTrajectory,
    clean_block,
    corrupt,
    input_rsnr,
    make_trajectory,
)
from .solver import SolverConfig, SolverState, cost, denoise, denoise_stream

__all__ = [
    "AltismoothError",
    "BadRangeError",
    "BrownConstants",
    "BrownParams",
    "CorrelationMatrix",
    "CovarianceBasis",
    "DegenerateInputError",
    "DivergedError",
    "EnergyState",
    "FitResult",
    "NoiseSpec",
    "NoiseState",
    "NonFiniteError",
    "NotPositiveDefiniteError",
    "ParamSeries",
    "ParamTrajectory",
    "ShapeMismatchError",
    "SolverConfig",
    "SolverState",
    "VarianceChain",
    "brown_jacobian",
    "brown_waveform",
    "build_correlation",
    "clean_block",
    "corrupt",
    "cost",
    "decompose",
    "denoise",
    "denoise_stream",
    "fit_block",
    "gates_to_meters",
    "input_rsnr",
    "jason2_like",
    "load_constants",
    "ls_fit",
    "make_trajectory",
    "meters_to_gates",
    "posterior_mean_fast",
    "prior_quadratic_form",
    "rmse",
    "rsnr",
    "sigma_c_sq",
    "std",
    "std_20hz",
    "svd_filter",
    "svd_filter_stream",
    "waveform_block",
]
