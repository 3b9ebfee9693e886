"""Denoising signals on d-dimensional grids.

Three estimator families (total-variation denoising, Laplacian smoothing,
low-frequency eigenprojection) plus trivial baselines, the closed-form
minimax bounds that separate them, canonical signal generators, and a
deterministic experiment harness with a CLI.
"""

from .estimators import (EstimatorConfig, RiskBreakdown, apply_estimator,
                         identity_estimator, laplacian_eigenmaps,
                         laplacian_smooth, linear_smoother_exact_risk,
                         mean_estimator)
from .grid import (EdgeVector, GridShape, NonCubicGridError, Signal,
                   dense_incidence, flat_to_multi, incidence_adjoint,
                   incidence_apply, laplacian_apply, multi_to_flat,
                   sobolev_seminorm, tv_seminorm)
from .signals import (SignalSpec, add_noise, generate, linear_signal, mse,
                      one_hot, piecewise_constant, replicate_seed)
from .solver import TvSolveReport, tv_denoise, tv_duality_gap
from .spectral import (SpectrumView, grid_eigenvalues, spectral_filter,
                       spectral_forward, spectral_inverse)
from .tv1d import tv_prox_1d

__version__ = "0.1.0"

__all__ = [
    "EdgeVector", "EstimatorConfig", "GridShape", "NonCubicGridError",
    "RiskBreakdown", "Signal", "SignalSpec", "SpectrumView", "TvSolveReport",
    "add_noise", "apply_estimator", "dense_incidence", "flat_to_multi",
    "generate", "grid_eigenvalues", "identity_estimator", "incidence_adjoint",
    "incidence_apply", "laplacian_apply", "laplacian_eigenmaps",
    "laplacian_smooth", "linear_signal", "linear_smoother_exact_risk",
    "mean_estimator", "mse", "multi_to_flat", "one_hot", "piecewise_constant",
    "replicate_seed", "sobolev_seminorm", "spectral_filter",
    "spectral_forward", "spectral_inverse", "tv_denoise", "tv_duality_gap",
    "tv_prox_1d", "tv_seminorm",
]
