"""Grid denoisers: TV, spectral smoothers, trivial baselines, exact risk.

All estimators are pure functions of the input signal.  The two spectral
smoothers are linear filters in the cosine eigenbasis; TV denoising is the
only nonlinear method and delegates to :mod:`gridtv.solver`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Signal
from .solver import TvSolveReport, tv_denoise
from .spectral import grid_eigenvalues, spectral_filter

__all__ = [
    "ESTIMATOR_FAMILIES",
    "EstimatorConfig",
    "RiskBreakdown",
    "apply_estimator",
    "laplacian_smooth",
    "laplacian_eigenmaps",
    "mean_estimator",
    "identity_estimator",
    "linear_smoother_exact_risk",
]

ESTIMATOR_FAMILIES = (
    "tv", "laplacian_smoothing", "laplacian_eigenmaps", "mean", "identity")


@dataclass(frozen=True)
class EstimatorConfig:
    """Tagged union of estimator family plus its tuning parameter.

    ``lam`` is required by the ``tv`` and ``laplacian_smoothing`` families,
    ``k`` by ``laplacian_eigenmaps``; the baselines take no parameter.
    ``gap_tol`` and ``max_iter`` only matter for ``tv``.
    """

    family: str
    lam: float | None = None
    k: int | None = None
    gap_tol: float = 1e-6
    max_iter: int = 10_000

    def __post_init__(self):
        if self.family not in ESTIMATOR_FAMILIES:
            raise ValueError(f"unknown estimator family {self.family!r}")
        needs_lam = self.family in ("tv", "laplacian_smoothing")
        if needs_lam and (self.lam is None or self.lam < 0):
            raise ValueError(f"{self.family} needs a nonnegative lam")
        if not needs_lam and self.lam is not None:
            raise ValueError(f"{self.family} takes no lam")
        if self.family == "laplacian_eigenmaps":
            if self.k is None or self.k < 1:
                raise ValueError("laplacian_eigenmaps needs k >= 1")
        elif self.k is not None:
            raise ValueError(f"{self.family} takes no k")
        if self.gap_tol <= 0:
            raise ValueError("gap_tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")


def laplacian_smooth(y: Signal, lam: float) -> Signal:
    """Quadratically penalized smoother, per-frequency gain ``1/(1 + lam rho)``."""
    if not (lam >= 0.0):
        raise ValueError(f"lam must be nonnegative, got {lam}")
    if lam == 0.0:
        return y
    rho = grid_eigenvalues(y.shape).eigenvalues
    return spectral_filter(y, 1.0 / (1.0 + lam * rho))


def laplacian_eigenmaps(y: Signal, k: int) -> Signal:
    """Projection onto the ``k`` lowest-frequency Laplacian eigenvectors.

    Ties between equal eigenvalues are broken by flat node index of the
    frequency multi-index, so the projector is deterministic.
    """
    n = y.shape.n
    k = int(k)
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    if k == n:
        return y
    if k == 1:
        return mean_estimator(y)
    spectrum = grid_eigenvalues(y.shape)
    gain = np.zeros(n)
    gain[spectrum.order[:k]] = 1.0
    return spectral_filter(y, gain)


def mean_estimator(y: Signal) -> Signal:
    """Constant signal at the grand mean."""
    return Signal(np.full(y.shape.n, y.values.mean()), y.shape)


def identity_estimator(y: Signal) -> Signal:
    """Returns the data unchanged."""
    return y


def apply_estimator(y: Signal, config: EstimatorConfig
                    ) -> tuple[Signal, TvSolveReport | None]:
    """Run the configured estimator; TV also returns its solve report."""
    if config.family == "tv":
        report = tv_denoise(y, config.lam, gap_tol=config.gap_tol,
                            max_iter=config.max_iter)
        return report.theta_hat, report
    if config.family == "laplacian_smoothing":
        return laplacian_smooth(y, config.lam), None
    if config.family == "laplacian_eigenmaps":
        return laplacian_eigenmaps(y, config.k), None
    if config.family == "mean":
        return mean_estimator(y), None
    return identity_estimator(y), None


@dataclass(frozen=True)
class RiskBreakdown:
    """Exact risk of a linear smoother split into its two sources."""

    variance_term: float
    bias_term: float

    @property
    def risk(self) -> float:
        return self.variance_term + self.bias_term


def linear_smoother_exact_risk(smoother, theta0: Signal,
                               sigma: float) -> RiskBreakdown:
    """Exact mean squared error of a fixed linear smoother at ``theta0``.

    ``risk = sigma^2 ||S||_F^2 / n + ||(S - I) theta0||^2 / n``.

    Parameters
    ----------
    smoother : array_like
        Either a length-n spectral gain (diagonal in the cosine eigenbasis)
        or a dense n-by-n matrix.
    theta0 : Signal
        True mean parameter.
    sigma : float
        Noise standard deviation.
    """
    n = theta0.shape.n
    s = np.asarray(smoother, dtype=np.float64)
    if s.shape == (n,):
        frob_sq = float(s @ s)
        resid = spectral_filter(theta0, s - 1.0).values
    elif s.shape == (n, n):
        frob_sq = float((s * s).sum())
        resid = s @ theta0.values - theta0.values
    else:
        raise ValueError(
            f"smoother must be a length-{n} gain or {n}x{n} matrix, got {s.shape}")
    return RiskBreakdown(variance_term=sigma ** 2 * frob_sq / n,
                         bias_term=float(resid @ resid) / n)
