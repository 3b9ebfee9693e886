"""Fast invariant suites behind the ``selftest`` CLI subcommand.

Each suite re-verifies a structural identity the library relies on and
prints one PASS/FAIL line.  These are smoke checks, not the full test
suite; they run in seconds.
"""

from __future__ import annotations

import numpy as np

from .grid import (GridShape, Signal, EdgeVector, dense_incidence,
                   incidence_adjoint, incidence_apply, laplacian_apply,
                   tv_seminorm)
from .solver import tv_denoise
from .spectral import grid_eigenvalues, spectral_filter, spectral_forward
from .theory import ball_embedding_check, birge_massart_rho
from .tv1d import tv_prox_1d

__all__ = ["run_all"]


def _check_adjointness(rng) -> tuple[bool, str]:
    worst = 0.0
    shapes = [GridShape((7,)), GridShape((4, 5)), GridShape((3, 4, 2)),
              GridShape((2, 2, 2, 2))]
    for shape in shapes:
        for _ in range(20):
            theta = Signal(rng.standard_normal(shape.n), shape)
            u = EdgeVector(rng.standard_normal(shape.m), shape)
            lhs = incidence_apply(theta).values @ u.values
            rhs = theta.values @ incidence_adjoint(u).values
            scale = max(np.linalg.norm(theta.values) * np.linalg.norm(u.values),
                        1e-30)
            worst = max(worst, abs(lhs - rhs) / scale)
    return worst <= 1e-12, f"max relative defect {worst:.2e}"


def _check_null_space(rng) -> tuple[bool, str]:
    worst = 0.0
    for shape in [GridShape((9,)), GridShape((5, 5)), GridShape((3, 3, 3))]:
        const = Signal(np.full(shape.n, rng.uniform(-5, 5)), shape)
        worst = max(worst, np.abs(laplacian_apply(const).values).max())
    return worst <= 1e-12, f"max |L 1| entry {worst:.2e}"


def _check_parseval(rng) -> tuple[bool, str]:
    worst = 0.0
    for shape in [GridShape((16,)), GridShape((8, 8)), GridShape((4, 4, 4))]:
        for _ in range(10):
            theta = Signal(rng.standard_normal(shape.n), shape)
            gamma = spectral_forward(theta)
            a, b = np.linalg.norm(gamma.values), np.linalg.norm(theta.values)
            worst = max(worst, abs(a - b) / max(b, 1e-30))
    return worst <= 1e-10, f"max norm mismatch {worst:.2e}"


def _check_diagonalization(rng) -> tuple[bool, str]:
    worst = 0.0
    for shape in [GridShape((8,)), GridShape((6, 6)), GridShape((4, 4, 4))]:
        rho = grid_eigenvalues(shape).eigenvalues
        for _ in range(5):
            theta = Signal(rng.standard_normal(shape.n), shape)
            via_filter = spectral_filter(theta, rho).values
            direct = laplacian_apply(theta).values
            scale = max(np.linalg.norm(direct), 1e-30)
            worst = max(worst, np.linalg.norm(via_filter - direct) / scale)
    return worst <= 1e-9, f"max relative defect {worst:.2e}"


def _check_eigen_dense(rng) -> tuple[bool, str]:
    worst = 0.0
    for shape in [GridShape((6,)), GridShape((4, 4)), GridShape((3, 3, 3))]:
        d_mat = dense_incidence(shape)
        dense = np.sort(np.linalg.eigvalsh(d_mat.T @ d_mat))
        ours = np.sort(grid_eigenvalues(shape).eigenvalues)
        worst = max(worst, np.abs(dense - ours).max())
    return worst <= 1e-9, f"max eigenvalue mismatch {worst:.2e}"


def _check_prox_kkt(rng) -> tuple[bool, str]:
    worst = 0.0
    for _ in range(50):
        n = int(rng.integers(2, 200))
        y = rng.standard_normal(n) * rng.uniform(0.5, 3.0)
        w = float(rng.uniform(0.05, 2.0))
        x = tv_prox_1d(y, w)
        s = np.cumsum(x - y)[:-1] / w
        diffs = np.diff(x)
        ok = np.all(np.abs(s) <= 1 + 1e-9)
        active = np.abs(diffs) > 1e-12
        ok &= np.allclose(s[active], np.sign(diffs[active]), atol=1e-9)
        ok &= abs((x - y).sum()) <= 1e-8 * max(1.0, np.abs(y).sum())
        worst = max(worst, 0.0 if ok else 1.0)
    return worst == 0.0, "subgradient conditions on 50 random instances"


def _check_tv_certificates(rng) -> tuple[bool, str]:
    worst = 0.0
    for shape in [GridShape((50,)), GridShape((8, 8)), GridShape((4, 4, 4))]:
        y = Signal(rng.standard_normal(shape.n), shape)
        report = tv_denoise(y, lam=1.0, gap_tol=1e-8)
        if not report.converged:
            return False, f"no certificate on {shape.side_lengths}"
        worst = max(worst, report.relative_gap)
    return True, f"max relative gap {worst:.2e}"


def _check_shrinkage(rng) -> tuple[bool, str]:
    shape = GridShape((8, 8))
    y = Signal(rng.standard_normal(shape.n), shape)
    tv_y = tv_seminorm(y)
    for lam in (0.1, 1.0, 10.0):
        report = tv_denoise(y, lam)
        if tv_seminorm(report.theta_hat) > tv_y + 1e-9:
            return False, f"difference norm grew at lam={lam}"
    return True, "difference seminorm nonincreasing"


def _check_embedding(rng) -> tuple[bool, str]:
    result = ball_embedding_check(3.0, GridShape((8, 8)), samples=200,
                                  seed=int(rng.integers(0, 2 ** 31)))
    return result.passed, f"worst tv/r ratio {result.worst_ratio:.3f}"


def _check_root_interval(rng) -> tuple[bool, str]:
    rho1 = birge_massart_rho(1.0)
    ok = 2.34 < rho1 < 2.35
    resid = abs(rho1 * np.log(rho1) - 2.0)
    return ok and resid < 1e-10, f"rho_1={rho1:.6f} residual {resid:.1e}"


_SUITES = (
    ("incidence adjointness", _check_adjointness),
    ("laplacian null space", _check_null_space),
    ("transform isometry", _check_parseval),
    ("spectral diagonalization", _check_diagonalization),
    ("eigenvalues vs dense", _check_eigen_dense),
    ("1d prox optimality", _check_prox_kkt),
    ("tv gap certificates", _check_tv_certificates),
    ("tv difference shrinkage", _check_shrinkage),
    ("ell1-ball embedding", _check_embedding),
    ("piecewise-root interval", _check_root_interval),
)


def run_all(seed: int = 0) -> int:
    rng = np.random.Generator(np.random.Philox(seed))
    failures = 0
    for name, suite in _SUITES:
        ok, detail = suite(rng)
        status = "PASS" if ok else "FAIL"
        print(f"{status}  {name}: {detail}")
        failures += not ok
    if failures:
        print(f"{failures} suite(s) failed")
        return 1
    print("all suites passed")
    return 0
