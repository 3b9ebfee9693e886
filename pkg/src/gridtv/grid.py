"""Rectangular lattices and their first-difference machinery.

Conventions used throughout the package:

* flat node indices are 0-based and row-major (last axis fastest);
* multi-indices are 1-based, ``(i_1, ..., i_d)`` with ``i_j`` in ``{1, ..., l_j}``;
* edges are enumerated axis-major: all axis-0 edges ordered by the flat
  index of their lower endpoint, then all axis-1 edges, and so on.  The
  edge between node ``i`` and its axis-``a`` successor ``j = i + stride_a``
  carries the value ``theta_j - theta_i``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "GridShape",
    "Signal",
    "EdgeVector",
    "NonCubicGridError",
    "incidence_apply",
    "incidence_adjoint",
    "laplacian_apply",
    "dense_incidence",
    "tv_seminorm",
    "sobolev_seminorm",
    "flat_to_multi",
    "multi_to_flat",
]

# dense_incidence materializes an m-by-n matrix; refuse anything bigger.
DENSE_NODE_LIMIT = 10_000


class NonCubicGridError(ValueError):
    """An operation that needs equal side lengths got a box grid."""


@dataclass(frozen=True)
class GridShape:
    """Dimensions of a rectangular lattice graph.

    Parameters
    ----------
    side_lengths : tuple of int
        Number of nodes along each axis, all positive.
    """

    side_lengths: tuple[int, ...]

    def __post_init__(self):
        sides = tuple(int(s) for s in self.side_lengths)
        if len(sides) < 1:
            raise ValueError("grid needs at least one axis")
        if any(s < 1 for s in sides):
            raise ValueError(f"side lengths must be >= 1, got {sides}")
        object.__setattr__(self, "side_lengths", sides)

    @classmethod
    def cube(cls, ell: int, d: int) -> "GridShape":
        """Cubic grid with ``d`` axes of length ``ell``."""
        return cls((ell,) * d)

    @property
    def d(self) -> int:
        """Number of axes."""
        return len(self.side_lengths)

    @property
    def n(self) -> int:
        """Number of nodes."""
        return math.prod(self.side_lengths)

    @property
    def m(self) -> int:
        """Number of edges."""
        n = self.n
        return sum((s - 1) * (n // s) for s in self.side_lengths)

    @property
    def d_max(self) -> int:
        """Maximum node degree of a grid with interior nodes, ``2 d``."""
        return 2 * self.d

    @property
    def is_cubic(self) -> bool:
        """True when all side lengths are equal."""
        return len(set(self.side_lengths)) == 1

    @property
    def ell(self) -> int:
        """Common side length; only defined for cubic grids."""
        if not self.is_cubic:
            raise NonCubicGridError(f"grid {self.side_lengths} is not cubic")
        return self.side_lengths[0]

    def axis_edge_counts(self) -> tuple[int, ...]:
        """Edges per axis, in the axis-major enumeration order."""
        n = self.n
        return tuple((s - 1) * (n // s) for s in self.side_lengths)


def _as_readonly(values, length: int, what: str) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1 or arr.shape[0] != length:
        raise ValueError(f"{what} must be a flat array of length {length}, "
                         f"got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{what} contains non-finite entries")
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Signal:
    """A real value per grid node, stored flat in row-major node order."""

    values: np.ndarray
    shape: GridShape

    def __post_init__(self):
        object.__setattr__(
            self, "values", _as_readonly(self.values, self.shape.n, "signal"))

    @classmethod
    def from_array(cls, arr) -> "Signal":
        """Build a signal from a d-dimensional array, inferring the shape."""
        arr = np.asarray(arr, dtype=np.float64)
        return cls(arr.ravel(), GridShape(arr.shape))

    def grid(self) -> np.ndarray:
        """The values reshaped to the lattice dimensions (read-only view)."""
        return self.values.reshape(self.shape.side_lengths)

    def with_values(self, values) -> "Signal":
        return Signal(values, self.shape)


@dataclass(frozen=True)
class EdgeVector:
    """A real value per grid edge, in the axis-major edge enumeration."""

    values: np.ndarray
    shape: GridShape

    def __post_init__(self):
        object.__setattr__(
            self, "values", _as_readonly(self.values, self.shape.m, "edge vector"))

    def axis_view(self, axis: int) -> np.ndarray:
        """Values of the given axis's edges, shaped like the diff array."""
        counts = self.shape.axis_edge_counts()
        start = sum(counts[:axis])
        dims = list(self.shape.side_lengths)
        dims[axis] -= 1
        return self.values[start:start + counts[axis]].reshape(dims)


def incidence_apply(theta: Signal) -> EdgeVector:
    """First differences along every axis: the edge-incidence operator."""
    g = theta.grid()
    parts = [np.diff(g, axis=a).ravel() for a in range(theta.shape.d)]
    return EdgeVector(np.concatenate(parts) if parts else np.empty(0), theta.shape)


def incidence_adjoint(u: EdgeVector) -> Signal:
    """Adjoint of :func:`incidence_apply` (divergence with a sign)."""
    out = np.zeros(u.shape.side_lengths)
    for a in range(u.shape.d):
        ua = u.axis_view(a)
        lo = [slice(None)] * u.shape.d
        hi = [slice(None)] * u.shape.d
        lo[a] = slice(None, -1)
        hi[a] = slice(1, None)
        out[tuple(lo)] -= ua
        out[tuple(hi)] += ua
    return Signal(out.ravel(), u.shape)


def laplacian_apply(theta: Signal) -> Signal:
    """Graph-Laplacian action, the adjoint composed with the differences."""
    return incidence_adjoint(incidence_apply(theta))


def dense_incidence(shape: GridShape) -> np.ndarray:
    """Materialize the m-by-n incidence matrix.  Test oracle only.

    Row ``e`` has ``-1`` at the lower endpoint and ``+1`` at the upper
    endpoint of edge ``e``, in the package-wide edge enumeration.
    """
    if shape.n > DENSE_NODE_LIMIT:
        raise ValueError(
            f"refusing dense incidence for n={shape.n} > {DENSE_NODE_LIMIT}")
    n = shape.n
    strides = _flat_strides(shape)
    rows = []
    for a in range(shape.d):
        for i in range(n):
            if _axis_coord(i, a, shape) < shape.side_lengths[a] - 1:
                row = np.zeros(n)
                row[i] = -1.0
                row[i + strides[a]] = 1.0
                rows.append(row)
    return np.asarray(rows).reshape(len(rows), n)


def tv_seminorm(theta: Signal) -> float:
    """Sum of absolute differences across all grid edges."""
    return float(np.abs(incidence_apply(theta).values).sum())


def sobolev_seminorm(theta: Signal) -> float:
    """Euclidean norm of the edge differences."""
    return float(np.linalg.norm(incidence_apply(theta).values))


def _flat_strides(shape: GridShape) -> tuple[int, ...]:
    strides = []
    acc = 1
    for s in reversed(shape.side_lengths):
        strides.append(acc)
        acc *= s
    return tuple(reversed(strides))


def _axis_coord(flat: int, axis: int, shape: GridShape) -> int:
    return (flat // _flat_strides(shape)[axis]) % shape.side_lengths[axis]


def flat_to_multi(i: int, shape: GridShape) -> tuple[int, ...]:
    """1-based multi-index of flat node index ``i``."""
    if not 0 <= i < shape.n:
        raise IndexError(f"flat index {i} out of range for n={shape.n}")
    zero_based = np.unravel_index(i, shape.side_lengths)
    return tuple(int(c) + 1 for c in zero_based)


def multi_to_flat(multi, shape: GridShape) -> int:
    """Flat node index of a 1-based multi-index."""
    multi = tuple(int(c) for c in multi)
    if len(multi) != shape.d:
        raise IndexError(f"multi-index {multi} has wrong length for d={shape.d}")
    if any(not 1 <= c <= s for c, s in zip(multi, shape.side_lengths)):
        raise IndexError(f"multi-index {multi} out of range for {shape.side_lengths}")
    return int(np.ravel_multi_index(tuple(c - 1 for c in multi), shape.side_lengths))
