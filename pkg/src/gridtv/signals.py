"""Test-signal generators, the Gaussian observation model, and MSE.

Each generator scales its signal so the declared seminorm hits the target
radius exactly, which removes a free constant from rate experiments.  Noise
comes from a counter-based generator (Philox), so replicates are
reproducible and can be generated concurrently from derived seeds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import GridShape, Signal

__all__ = [
    "SIGNAL_FAMILIES",
    "SignalSpec",
    "generate",
    "one_hot",
    "linear_signal",
    "piecewise_constant",
    "add_noise",
    "replicate_seed",
    "mse",
]

SIGNAL_FAMILIES = ("one_hot", "linear", "piecewise_constant")


@dataclass(frozen=True)
class SignalSpec:
    """A signal family pinned to a target seminorm radius."""

    family: str
    shape: GridShape
    target_radius: float
    radius_kind: str

    def __post_init__(self):
        if self.family not in SIGNAL_FAMILIES:
            raise ValueError(f"unknown signal family {self.family!r}")
        if self.radius_kind not in ("tv", "sobolev"):
            raise ValueError(f"radius_kind must be tv or sobolev, got "
                             f"{self.radius_kind!r}")
        if self.family == "linear" and self.radius_kind != "sobolev":
            raise ValueError("linear signals are scaled by their sobolev radius")
        if self.family == "piecewise_constant" and self.radius_kind != "tv":
            raise ValueError("piecewise_constant signals are scaled by their tv radius")
        if self.target_radius < 0:
            raise ValueError("target_radius must be nonnegative")


def generate(spec: SignalSpec) -> Signal:
    if spec.family == "one_hot":
        return one_hot(spec.shape, spec.target_radius)
    if spec.family == "linear":
        return linear_signal(spec.shape, spec.target_radius)
    return piecewise_constant(spec.shape, spec.target_radius)


def _require_cubic(shape: GridShape):
    if not shape.is_cubic:
        raise ValueError(f"signal generators need cubic grids, got "
                         f"{shape.side_lengths}")


def one_hot(shape: GridShape, target_tv_radius: float) -> Signal:
    """Single spike at the center node, scaled so its TV equals the target.

    The spike's TV is amplitude times the center degree, so the amplitude
    is ``target / degree``; the center is interior (degree ``2 d``) for
    ``ell >= 3``.
    """
    _require_cubic(shape)
    if target_tv_radius < 0:
        raise ValueError("target radius must be nonnegative")
    ell = shape.ell
    center = (ell // 2,) * shape.d
    degree = sum((c > 0) + (c < ell - 1) for c in center)
    values = np.zeros(shape.n)
    if degree == 0:
        if target_tv_radius > 0:
            raise ValueError("a single-node grid has no edges to carry TV")
        return Signal(values, shape)
    flat = int(np.ravel_multi_index(center, shape.side_lengths))
    values[flat] = target_tv_radius / degree
    return Signal(values, shape)


def linear_signal(shape: GridShape, target_sobolev_radius: float) -> Signal:
    """Additively separable ramp, every edge difference equal.

    The unscaled signal has value ``i_1 + ... + i_d`` at multi-index
    ``(i_1, ..., i_d)``; each of the m edges then differs by exactly 1,
    so the squared seminorm is ``m = d (ell-1) ell^(d-1)`` and the scale
    factor is ``target / sqrt(m)``.
    """
    _require_cubic(shape)
    if shape.ell < 2:
        raise ValueError("linear signal needs ell >= 2")
    if target_sobolev_radius < 0:
        raise ValueError("target radius must be nonnegative")
    ramp = np.zeros(shape.side_lengths)
    coords = np.arange(1, shape.ell + 1, dtype=np.float64)
    for a in range(shape.d):
        view = [np.newaxis] * shape.d
        view[a] = slice(None)
        ramp = ramp + coords[tuple(view)]
    scale = target_sobolev_radius / np.sqrt(shape.m)
    return Signal((scale * ramp).ravel(), shape)


def piecewise_constant(shape: GridShape, target_tv_radius: float) -> Signal:
    """Indicator of the centered half-width hypercube, scaled to target TV.

    The block side is ``floor(ell/2)``, placed centrally and strictly
    interior for ``ell >= 4``, so it has ``2 d b^(d-1)`` boundary edges.
    """
    _require_cubic(shape)
    if shape.ell < 4:
        raise ValueError("piecewise_constant needs ell >= 4")
    if target_tv_radius < 0:
        raise ValueError("target radius must be nonnegative")
    ell = shape.ell
    b = ell // 2
    start = (ell - b) // 2
    boundary_edges = 2 * shape.d * b ** (shape.d - 1)
    amplitude = target_tv_radius / boundary_edges
    block = np.zeros(shape.side_lengths)
    block[tuple(slice(start, start + b) for _ in range(shape.d))] = amplitude
    return Signal(block.ravel(), shape)


def add_noise(theta0: Signal, sigma: float, seed: int) -> Signal:
    """Observation model: ``theta0`` plus i.i.d. centered Gaussians.

    The generator is Philox keyed by ``seed``: same seed, same draw,
    bitwise."""
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    if sigma == 0:
        return theta0
    rng = np.random.Generator(np.random.Philox(int(seed)))
    z = rng.standard_normal(theta0.shape.n)
    return Signal(theta0.values + sigma * z, theta0.shape)


def replicate_seed(base_seed: int, n: int, replicate: int) -> int:
    """Stable per-replicate seed derived from (base_seed, n, replicate)."""
    ss = np.random.SeedSequence((int(base_seed), int(n), int(replicate)))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def mse(theta_hat: Signal, theta0: Signal) -> float:
    """Mean squared error ``||theta_hat - theta0||^2 / n``."""
    if theta_hat.shape != theta0.shape:
        raise ValueError("signals live on different grids")
    diff = theta_hat.values - theta0.values
    return float(diff @ diff) / theta0.shape.n
