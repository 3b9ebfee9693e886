"""Shared fixtures and independent oracles used across the test suite.

The oracles here deliberately avoid the library's own algorithms: dense
matrices for the operators, exhaustive enumeration plus subgradient
verification for the 1-D prox.
"""

import itertools

import numpy as np
import pytest

from gridtv.grid import GridShape, dense_incidence


@pytest.fixture
def rng():
    return np.random.default_rng(20240713)


def dense_laplacian(shape: GridShape) -> np.ndarray:
    d_mat = dense_incidence(shape)
    return d_mat.T @ d_mat


def oracle_tv_prox_1d(y, w, tol=1e-9):
    """Exact 1-D TV prox by exhaustive KKT enumeration (n <= ~8).

    Enumerates every partition of the path into constant blocks and every
    sign pattern on the block boundaries, solves each candidate's
    stationarity equations, and keeps the ones whose subgradients verify.
    The problem is strictly convex, so all verified candidates agree.
    """
    y = np.asarray(y, dtype=float)
    n = len(y)
    if w == 0 or n == 1:
        return y.copy()
    solutions = []
    for boundary_mask in range(2 ** (n - 1)):
        cuts = [i for i in range(n - 1) if boundary_mask >> i & 1]
        starts = [0] + [c + 1 for c in cuts]
        ends = [c + 1 for c in cuts] + [n]
        blocks = list(zip(starts, ends))
        for signs in itertools.product((-1.0, 1.0), repeat=len(cuts)):
            s_left = (0.0,) + signs
            s_right = signs + (0.0,)
            theta = np.empty(n)
            vals = []
            for (b0, b1), sl, sr in zip(blocks, s_left, s_right):
                v = y[b0:b1].mean() + w * (sr - sl) / (b1 - b0)
                vals.append(v)
                theta[b0:b1] = v
            # boundary signs must match the realized jumps, strictly
            ok = all((vb - va) * s > tol * w
                     for va, vb, s in zip(vals, vals[1:], signs))
            if not ok:
                continue
            # within-block subgradients must stay inside [-1, 1]
            feasible = True
            for (b0, b1), sl in zip(blocks, s_left):
                partial = sl + np.cumsum(theta[b0:b1 - 1] - y[b0:b1 - 1]) / w
                if partial.size and np.max(np.abs(partial)) > 1 + tol:
                    feasible = False
                    break
            if feasible:
                solutions.append(theta)
    assert solutions, "enumeration oracle found no KKT point"
    for sol in solutions[1:]:
        assert np.allclose(sol, solutions[0], atol=1e-8)
    return solutions[0]


def tv_objective_1d(y, x, w) -> float:
    return 0.5 * np.sum((x - y) ** 2) + w * np.sum(np.abs(np.diff(x)))
