"""Closed-form eigenstructure of the cubic-grid Laplacian.

The free-boundary grid Laplacian is diagonalized by separable cosine bases:
along one axis of length ``l`` the eigenvectors are the orthonormal type-II
cosine vectors and the eigenvalues are ``4 sin^2(pi k / (2 l))`` for
``k = 0, ..., l-1``.  On a d-dimensional cubic grid the eigenvalues add up
across axes (a Kronecker sum) and the transform factorizes into d per-axis
cosine transforms, so no eigenvector matrix is ever materialized.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.fft

from .grid import GridShape, NonCubicGridError, Signal

__all__ = [
    "SpectrumView",
    "grid_eigenvalues",
    "spectral_forward",
    "spectral_inverse",
    "spectral_filter",
]


def _require_cubic(shape: GridShape):
    if not shape.is_cubic:
        raise NonCubicGridError(
            f"spectral operations need equal side lengths, got {shape.side_lengths}")


@dataclass(frozen=True)
class SpectrumView:
    """Grid-Laplacian eigenvalues plus a deterministic ascending order.

    ``eigenvalues[i]`` is the eigenvalue whose multi-index equals the
    multi-index of flat node ``i``; ``order`` sorts them ascending with
    ties broken by flat index, which fixes the truncation used by the
    low-frequency projection estimator.
    """

    eigenvalues: np.ndarray
    order: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "eigenvalues", np.asarray(self.eigenvalues, float))
        object.__setattr__(self, "order", np.asarray(self.order, np.intp))


def axis_eigenvalues(ell: int) -> np.ndarray:
    """Eigenvalues of the length-``ell`` path Laplacian, in frequency order."""
    k = np.arange(ell)
    return 4.0 * np.sin(np.pi * k / (2 * ell)) ** 2


def grid_eigenvalues(shape: GridShape) -> SpectrumView:
    """Eigenvalues of the cubic-grid Laplacian, indexed by node multi-index."""
    _require_cubic(shape)
    w = axis_eigenvalues(shape.ell)
    rho = np.zeros(shape.side_lengths)
    for a in range(shape.d):
        view = [np.newaxis] * shape.d
        view[a] = slice(None)
        rho = rho + w[tuple(view)]
    flat = rho.ravel()
    order = np.argsort(flat, kind="stable")
    return SpectrumView(flat, order)


def spectral_forward(theta: Signal) -> Signal:
    """Coefficients of ``theta`` in the orthonormal cosine eigenbasis."""
    _require_cubic(theta.shape)
    gamma = scipy.fft.dctn(theta.grid(), type=2, norm="ortho")
    return Signal(gamma.ravel(), theta.shape)


def spectral_inverse(gamma: Signal) -> Signal:
    """Inverse of :func:`spectral_forward`."""
    _require_cubic(gamma.shape)
    theta = scipy.fft.idctn(gamma.grid(), type=2, norm="ortho")
    return Signal(theta.ravel(), gamma.shape)


def spectral_filter(y: Signal, gain) -> Signal:
    """Apply the linear smoother that multiplies each eigen-coefficient by ``gain``."""
    _require_cubic(y.shape)
    gain = np.asarray(gain, dtype=np.float64)
    if gain.shape != (y.shape.n,):
        raise ValueError(f"gain must have length n={y.shape.n}, got {gain.shape}")
    if not np.all(np.isfinite(gain)):
        raise ValueError("gain contains non-finite entries")
    gamma = scipy.fft.dctn(y.grid(), type=2, norm="ortho")
    out = scipy.fft.idctn(gamma * gain.reshape(y.shape.side_lengths),
                          type=2, norm="ortho")
    return Signal(out.ravel(), y.shape)
