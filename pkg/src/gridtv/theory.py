"""Closed-form risk bounds, canonical scalings and recommended tunings.

Every function here evaluates a printed formula; none of them estimate
anything from data.  Unspecified universal constants default to 1 and are
explicit inputs, so absolute values are meaningful only up to those
constants while rates (slopes in n) are exact.  Piecewise formulas return a
:class:`BoundValue` whose ``regime`` label identifies the active case,
which makes the case structure itself testable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grid import GridShape, Signal, dense_incidence, tv_seminorm
from .spectral import axis_eigenvalues, grid_eigenvalues

__all__ = [
    "BoundValue",
    "CanonicalRadii",
    "canonical_radii",
    "birge_massart_rho",
    "minimax_tv_lower",
    "minimax_linear_tv_lower",
    "minimax_linear_tv_lower_weak",
    "mean_estimator_risk_bound",
    "pinv_max_col_norm",
    "minimax_sobolev_lower",
    "sobolev_upper_le",
    "recommended_k",
    "recommended_lambda_ls",
    "recommended_lambda_tv",
    "eigen_partial_sum_bound",
    "eigen_partial_sum_exact",
    "ls_filter_integral",
    "ls_variance_bound",
    "ls_variance_exact",
    "ball_embedding_check",
    "EmbeddingCheckResult",
]

PINV_NODE_LIMIT = 4096


@dataclass(frozen=True)
class BoundValue:
    """A bound evaluation plus the case label that produced it."""

    value: float
    regime: str
    constant_c: float = 1.0

    def __post_init__(self):
        if self.value < 0:
            raise ValueError(f"bound value must be nonnegative, got {self.value}")


@dataclass(frozen=True)
class CanonicalRadii:
    """Radius scalings that make the nested smoothness classes embed."""

    tv_radius: float
    sobolev_radius: float


def canonical_radii(n: int, d: int) -> CanonicalRadii:
    """``n^(1 - 1/d)`` for the TV ball, ``n^(1/2 - 1/d)`` for the Sobolev ball."""
    if n < 1 or d < 1:
        raise ValueError("n and d must be positive")
    return CanonicalRadii(tv_radius=float(n) ** (1.0 - 1.0 / d),
                          sobolev_radius=float(n) ** (0.5 - 1.0 / d))


def birge_massart_rho(p: float) -> float:
    """Unique root greater than 1 of ``rho log rho = 2 / p`` for ``p in (0, 2)``.

    Bisection to absolute precision 1e-12; the root exceeds 1.76 on the
    whole parameter range.
    """
    if not 0.0 < p < 2.0:
        raise ValueError(f"p must lie in (0, 2), got {p}")
    target = 2.0 / p

    def f(rho: float) -> float:
        return rho * math.log(rho) - target

    lo, hi = 1.0, 2.0
    while f(hi) < 0.0:
        hi *= 2.0
    while hi - lo > 1e-12:
        mid = 0.5 * (lo + hi)
        if f(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def minimax_tv_lower(n: int, d_max: float, R_n: float, sigma: float,
                     c: float = 1.0) -> BoundValue:
    """Minimax-risk lower bound over the TV ball of radius ``R_n``.

    Three cases keyed on where ``R_n`` falls relative to
    ``sigma * d_max * sqrt(log n)`` and ``sigma * d_max * n / sqrt(rho_1)``,
    with ``rho_1`` the ``p = 1`` root of :func:`birge_massart_rho`.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if min(d_max, R_n, sigma, c) <= 0:
        raise ValueError("d_max, R_n, sigma and c must be positive")
    rho1 = birge_massart_rho(1.0)
    low = sigma * d_max * math.sqrt(math.log(n))
    high = sigma * d_max * n / math.sqrt(rho1)
    if R_n < low:
        packing = R_n ** 2 / (d_max ** 2 * n)
        parametric = sigma ** 2 / n
        if packing >= parametric:
            return BoundValue(c * packing, "small_radius:ell1", c)
        return BoundValue(c * parametric, "small_radius:parametric", c)
    if R_n > high:
        return BoundValue(c * sigma ** 2 / rho1, "large_radius", c)
    value = sigma * R_n * math.sqrt(1.0 + math.log(sigma * d_max * n / R_n)) \
        / (d_max * n)
    return BoundValue(c * value, "intermediate", c)


def minimax_linear_tv_lower(n: int, d_max: float, R_n: float,
                            sigma: float) -> BoundValue:
    """Minimax-linear-risk lower bound over the TV ball (no free constant)."""
    if n < 1 or min(d_max, sigma) <= 0 or R_n < 0:
        raise ValueError("inputs must be positive (R_n nonnegative)")
    parametric = sigma ** 2 / n
    if R_n == 0.0:
        return BoundValue(parametric, "parametric")
    ratio = sigma ** 2 * R_n ** 2 / (R_n ** 2 + sigma ** 2 * d_max ** 2 * n)
    if ratio >= parametric:
        return BoundValue(ratio, "ratio")
    return BoundValue(parametric, "parametric")


def minimax_linear_tv_lower_weak(n: int, d_max: float, R_n: float,
                                 sigma: float) -> float:
    """The weaker, simpler form ``(1/2)(R^2/(d_max^2 n) ^ sigma^2) v sigma^2/n``;
    always at most :func:`minimax_linear_tv_lower`."""
    if n < 1 or min(d_max, sigma) <= 0 or R_n < 0:
        raise ValueError("inputs must be positive (R_n nonnegative)")
    return max(0.5 * min(R_n ** 2 / (d_max ** 2 * n), sigma ** 2),
               sigma ** 2 / n)


def mean_estimator_risk_bound(n: int, R_n: float, M_n: float,
                              sigma: float) -> float:
    """Max-risk bound ``(sigma^2 + R_n^2 M_n^2) / n`` for the grand-mean smoother."""
    if n < 1 or min(R_n, M_n, sigma) < 0:
        raise ValueError("inputs must be nonnegative, n positive")
    return (sigma ** 2 + R_n ** 2 * M_n ** 2) / n


def pinv_max_col_norm(shape: GridShape) -> float:
    """Largest Euclidean column norm of the incidence pseudoinverse.

    Grows like ``sqrt(log n)`` on 2-d grids and stays bounded for d >= 3,
    which is what makes the grand mean competitive there.  Dense
    computation, guarded to small grids.
    """
    if shape.n > PINV_NODE_LIMIT:
        raise ValueError(
            f"refusing dense pseudoinverse for n={shape.n} > {PINV_NODE_LIMIT}")
    pinv = np.linalg.pinv(dense_incidence(shape))
    return float(np.linalg.norm(pinv, axis=0).max())


_SOBOLEV_ARMS = ("tradeoff", "variance", "bias")


def _sobolev_min(n: int, d: int, Rp_n: float, sigma: float) -> tuple[float, str]:
    arms = ((n * sigma ** 2) ** (2.0 / (d + 2)) * Rp_n ** (2.0 * d / (d + 2)),
            n * sigma ** 2,
            float(n) ** (2.0 / d) * Rp_n ** 2)
    idx = int(np.argmin(arms))
    return arms[idx], _SOBOLEV_ARMS[idx]


def minimax_sobolev_lower(n: int, d: int, Rp_n: float, sigma: float,
                          c: float = 1.0) -> BoundValue:
    """Minimax-risk lower bound over the Sobolev ball of radius ``Rp_n``."""
    if n < 1 or d < 1 or min(sigma, c) <= 0 or Rp_n < 0:
        raise ValueError("inputs must be positive (Rp_n nonnegative)")
    smallest, regime = _sobolev_min(n, d, Rp_n, sigma)
    return BoundValue(c / n * smallest + sigma ** 2 / n, regime, c)


def sobolev_upper_le(n: int, d: int, Rp_n: float, sigma: float,
                     c: float = 1.0) -> BoundValue:
    """Matching upper bound achieved by the low-frequency projection with
    ``k`` from :func:`recommended_k` (and by the quadratic smoother for
    d <= 3)."""
    if n < 1 or d < 1 or min(sigma, c) <= 0 or Rp_n < 0:
        raise ValueError("inputs must be positive (Rp_n nonnegative)")
    smallest, regime = _sobolev_min(n, d, Rp_n, sigma)
    return BoundValue(c / n * smallest + c * sigma ** 2 / n, regime, c)


def recommended_k(n: int, d: int, Rp_n: float) -> int:
    """Eigenvector count ``((n Rp^d)^(2/(d+2)) v 1) ^ n``, rounded and clamped."""
    if n < 1 or d < 1 or Rp_n < 0:
        raise ValueError("inputs must be positive (Rp_n nonnegative)")
    k = round(min(max((n * Rp_n ** d) ** (2.0 / (d + 2)), 1.0), float(n)))
    return int(min(max(k, 1), n))


def recommended_lambda_ls(n: int, d: int, Rp_n: float) -> float:
    """Smoothing penalty rate ``(n / Rp^2)^(2/(d+2))``, constant 1."""
    if n < 1 or d < 1 or Rp_n <= 0:
        raise ValueError("inputs must be positive")
    return (n / Rp_n ** 2) ** (2.0 / (d + 2))


def recommended_lambda_tv(n: int, d: int) -> float:
    """TV penalty rate: ``log n`` in 2-d, ``sqrt(log n)`` for d >= 3."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if d < 2:
        raise ValueError("tv tuning rate is stated for d >= 2 only")
    if d == 2:
        return math.log(n)
    return math.sqrt(math.log(n))


def eigen_partial_sum_bound(tau: int, ell: int, d: int) -> float:
    """Upper bound ``pi^2 d tau^(d+2) / ell^2`` on the low-frequency
    eigenvalue block sum."""
    if not 1 <= tau <= ell:
        raise ValueError(f"need 1 <= tau <= ell, got tau={tau}, ell={ell}")
    if d < 1:
        raise ValueError("d must be positive")
    return math.pi ** 2 * d * float(tau) ** (d + 2) / ell ** 2


def eigen_partial_sum_exact(tau: int, shape: GridShape) -> float:
    """Sum of the Laplacian eigenvalues over the tau^d lowest-frequency block."""
    ell = shape.ell
    if not 1 <= tau <= ell:
        raise ValueError(f"need 1 <= tau <= ell, got tau={tau}, ell={ell}")
    axis = axis_eigenvalues(ell)[:tau]
    # block sum is separable: each axis contributes tau^(d-1) copies
    return float(shape.d * tau ** (shape.d - 1) * axis.sum())


# surface measure of the unit sphere's positive orthant, dimensions 1..4
_ORTHANT_SURFACE = (1.0, math.pi / 2.0, math.pi / 2.0, math.pi ** 2 / 8.0)


def ls_filter_integral(d: int, lam: float) -> float:
    """Closed form of ``int_0^{(pi/2) sqrt(lam d)} u^(d-1) / (1 + u^2)^2 du``.

    These are the radial integrals that control the quadratic smoother's
    variance; the ``d = 4`` form carries the logarithmic term responsible
    for the extra log factor in four dimensions.
    """
    if d not in (1, 2, 3, 4):
        raise ValueError(f"closed forms cover d in 1..4, got {d}")
    if lam < 0:
        raise ValueError("lam must be nonnegative")
    t = 0.5 * math.pi * math.sqrt(lam * d)
    tsq = 1.0 + t * t
    if d == 1:
        return t / (2.0 * tsq) + 0.5 * math.atan(t)
    if d == 2:
        return t * t / (2.0 * tsq)
    if d == 3:
        return 0.5 * math.atan(t) - t / (2.0 * tsq)
    return 0.5 * (math.log(tsq) + 1.0 / tsq - 1.0)


def ls_variance_bound(lam: float, d: int, n: int) -> float:
    """Upper bound on ``sum_i 1 / (1 + lam rho_i)^2`` on a cubic d-grid.

    Assembled from the radial closed forms by comparing each multi-index
    shell with its enclosing orthant ball: one term per active-coordinate
    count k, ``C(d,k) A_k (2/pi)^k n^(k/d) lam^(-k/2) I_k(lam)``, plus 1
    for the zero frequency.  The k = d term is the headline
    ``const * n / lam^(d/2)`` rate.
    """
    if d not in (1, 2, 3, 4):
        raise ValueError(f"bound covers d in 1..4, got {d}")
    if n < 1 or lam < 0:
        raise ValueError("n must be positive and lam nonnegative")
    ell = float(n) ** (1.0 / d)
    total = 1.0
    for k in range(1, d + 1):
        coef = math.comb(d, k) * _ORTHANT_SURFACE[k - 1] * (2.0 / math.pi) ** k
        if lam == 0.0:
            # limit of lam^(-k/2) I_k(lam) as lam -> 0
            total += coef * ell ** k * (math.pi / 2.0) ** k * k ** (k / 2.0 - 1.0)
        else:
            total += coef * ell ** k * lam ** (-k / 2.0) * ls_filter_integral(k, lam)
    return total


def ls_variance_exact(lam: float, shape: GridShape) -> float:
    """Exact ``sum_i 1 / (1 + lam rho_i)^2`` from the closed-form eigenvalues."""
    if lam < 0:
        raise ValueError("lam must be nonnegative")
    rho = grid_eigenvalues(shape).eigenvalues
    gains = 1.0 / (1.0 + lam * rho)
    return float(gains @ gains)


@dataclass(frozen=True)
class EmbeddingCheckResult:
    """Outcome of sampling the ell_1 ball inside the TV ball."""

    passed: bool
    samples_checked: int
    worst_ratio: float


def ball_embedding_check(r: float, shape: GridShape, samples: int,
                         seed: int = 0) -> EmbeddingCheckResult:
    """Verify ``||theta||_1 <= r / d_max`` implies ``tv(theta) <= r`` by sampling.

    Checks every scaled standard basis vector plus ``samples`` random
    signed points of the scaled simplex boundary.
    """
    if samples < 1:
        raise ValueError("samples must be at least 1")
    if r < 0:
        raise ValueError("r must be nonnegative")
    n = shape.n
    budget = r / shape.d_max
    worst = 0.0
    checked = 0

    def tv_of(vec) -> float:
        return tv_seminorm(Signal(vec, shape))

    for i in range(n):
        vec = np.zeros(n)
        vec[i] = budget
        worst = max(worst, tv_of(vec))
        checked += 1
    rng = np.random.Generator(np.random.Philox(seed))
    for _ in range(samples):
        mass = rng.exponential(size=n)
        vec = budget * rng.uniform() * np.sign(rng.standard_normal(n)) \
            * mass / mass.sum()
        worst = max(worst, tv_of(vec))
        checked += 1
    ratio = worst / r if r > 0 else 0.0
    return EmbeddingCheckResult(passed=worst <= r + 1e-12 * max(1.0, r),
                                samples_checked=checked, worst_ratio=ratio)
