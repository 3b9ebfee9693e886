"""Rate-experiment harness: sweeps, oracle tuning, slopes, CSV emission.

The protocol mirrors the benchmark figures this package reproduces: for
each grid size, replicates share the same noisy draw across estimators
(paired comparisons), every tuning value in a multiplicative grid around
the theory-recommended value is evaluated on all replicates, and the
summary reports the tuning that minimizes the across-replicate mean MSE
(oracle tuning against the true signal).  Everything is deterministic
given the base seed; CSV output is byte-stable, so volatile wall times are
kept on the in-memory records (and an optional sidecar), never in the CSV.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, replace

import numpy as np

from .estimators import ESTIMATOR_FAMILIES, EstimatorConfig, apply_estimator
from .grid import GridShape
from .signals import (SIGNAL_FAMILIES, SignalSpec, add_noise, generate, mse,
                      replicate_seed)
from .theory import (canonical_radii, recommended_k, recommended_lambda_ls,
                     recommended_lambda_tv)

__all__ = [
    "ExperimentConfig",
    "ExperimentRecord",
    "SummaryRow",
    "ExperimentResult",
    "CSV_COLUMNS",
    "SUMMARY_COLUMNS",
    "tuning_grid",
    "run_experiment",
    "slope_estimate",
    "emit_csv",
    "emit_summary",
    "parse_config_file",
    "config_from_mapping",
]

CSV_COLUMNS = ("family", "d", "n", "sigma", "estimator", "tuning_value",
               "replicate", "seed", "mse", "solver_gap")
SUMMARY_COLUMNS = ("family", "d", "n", "sigma", "estimator", "tuning_value",
                   "mean_mse")

RADIUS_KIND = {"one_hot": "tv", "linear": "sobolev", "piecewise_constant": "tv"}


@dataclass(frozen=True)
class ExperimentConfig:
    """One sweep: a signal family against a list of grid sizes."""

    family: str
    d: int
    side_lengths: tuple[int, ...]
    sigma: float
    replicates: int = 5
    estimators: tuple[str, ...] = ESTIMATOR_FAMILIES
    grid_points: int = 15
    grid_span: float = 100.0
    base_seed: int = 0
    output: str | None = None
    gap_tol: float = 1e-6
    max_iter: int = 10_000

    def __post_init__(self):
        if self.family not in SIGNAL_FAMILIES:
            raise ValueError(f"unknown signal family {self.family!r}")
        if self.d < 1:
            raise ValueError("d must be positive")
        sides = tuple(int(s) for s in self.side_lengths)
        if not sides:
            raise ValueError("side_lengths must be nonempty")
        if any(b <= a for a, b in zip(sides, sides[1:])):
            raise ValueError("side_lengths must be strictly increasing")
        object.__setattr__(self, "side_lengths", sides)
        if self.sigma < 0:
            raise ValueError("sigma must be nonnegative")
        if self.replicates < 1:
            raise ValueError("replicates must be at least 1")
        ests = tuple(self.estimators)
        if not ests:
            raise ValueError("estimators must be nonempty")
        for est in ests:
            if est not in ESTIMATOR_FAMILIES:
                raise ValueError(f"unknown estimator {est!r}")
        object.__setattr__(self, "estimators", ests)
        if self.grid_points < 1:
            raise ValueError("grid_points must be at least 1")
        if self.grid_span < 1:
            raise ValueError("grid_span must be at least 1")


@dataclass(frozen=True)
class ExperimentRecord:
    """One (signal, n, estimator, tuning, replicate) -> MSE row."""

    family: str
    d: int
    n: int
    sigma: float
    estimator: str
    tuning_value: float | int | None
    replicate: int
    seed: int
    mse: float
    solver_gap: float | None
    wall_time: float


@dataclass(frozen=True)
class SummaryRow:
    """Oracle-tuned result for one (n, estimator)."""

    family: str
    d: int
    n: int
    sigma: float
    estimator: str
    tuning_value: float | int | None
    mean_mse: float


@dataclass(frozen=True)
class ExperimentResult:
    records: tuple[ExperimentRecord, ...]
    summary: tuple[SummaryRow, ...]
    nonconverged: int


def _grid_multipliers(points: int, span: float) -> np.ndarray:
    if points == 1:
        return np.ones(1)
    return span ** np.linspace(-1.0, 1.0, points)


def tuning_grid(estimator: str, n: int, d: int, config: ExperimentConfig
                ) -> tuple:
    """Tuning values for one estimator at one grid size.

    Multiplicative perturbations of the theory-recommended center, so the
    center itself (multiplier 1) is always in the grid.  The baselines have
    no tuning and get the single value ``None``.
    """
    if estimator in ("mean", "identity"):
        return (None,)
    mult = _grid_multipliers(config.grid_points, config.grid_span)
    sobolev_radius = canonical_radii(n, d).sobolev_radius
    if estimator == "tv":
        # the d >= 2 rate is log-based; in 1-d the classical n^(1/3) applies
        center = recommended_lambda_tv(n, d) if d >= 2 else float(n) ** (1.0 / 3)
        return tuple(float(center * m) for m in mult)
    if estimator == "laplacian_smoothing":
        center = recommended_lambda_ls(n, d, sobolev_radius)
        return tuple(float(center * m) for m in mult)
    center = recommended_k(n, d, sobolev_radius)
    ks = sorted({int(min(max(round(center * m), 1), n)) for m in mult})
    return tuple(ks)


def _estimator_config(estimator: str, tuning, config: ExperimentConfig
                      ) -> EstimatorConfig:
    if estimator == "tv":
        return EstimatorConfig("tv", lam=float(tuning),
                               gap_tol=config.gap_tol, max_iter=config.max_iter)
    if estimator == "laplacian_smoothing":
        return EstimatorConfig("laplacian_smoothing", lam=float(tuning))
    if estimator == "laplacian_eigenmaps":
        return EstimatorConfig("laplacian_eigenmaps", k=int(tuning))
    return EstimatorConfig(estimator)


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    """Run the full sweep; deterministic given ``config.base_seed``."""
    records = []
    summary = []
    nonconverged = 0
    for ell in config.side_lengths:
        shape = GridShape.cube(ell, config.d)
        n = shape.n
        radius_kind = RADIUS_KIND[config.family]
        radii = canonical_radii(n, config.d)
        target = radii.tv_radius if radius_kind == "tv" else radii.sobolev_radius
        theta0 = generate(SignalSpec(config.family, shape, target, radius_kind))
        seeds = [replicate_seed(config.base_seed, n, rep)
                 for rep in range(config.replicates)]
        ys = [add_noise(theta0, config.sigma, seed) for seed in seeds]
        for estimator in config.estimators:
            tunings = tuning_grid(estimator, n, config.d, config)
            mean_by_tuning = []
            for tuning in tunings:
                est_cfg = _estimator_config(estimator, tuning, config)
                errs = []
                for rep, (seed, y) in enumerate(zip(seeds, ys)):
                    t0 = time.perf_counter()
                    theta_hat, report = apply_estimator(y, est_cfg)
                    elapsed = time.perf_counter() - t0
                    gap = None
                    if report is not None:
                        gap = report.gap
                        if not report.converged:
                            nonconverged += 1
                    err = mse(theta_hat, theta0)
                    errs.append(err)
                    records.append(ExperimentRecord(
                        config.family, config.d, n, config.sigma, estimator,
                        tuning, rep, seed, err, gap, elapsed))
                mean_by_tuning.append(float(np.mean(errs)))
            best = int(np.argmin(mean_by_tuning))
            summary.append(SummaryRow(
                config.family, config.d, n, config.sigma, estimator,
                tunings[best], mean_by_tuning[best]))
    return ExperimentResult(tuple(records), tuple(summary), nonconverged)


def slope_estimate(summary, estimator: str) -> float:
    """Least-squares slope of log mean-MSE against log n for one estimator."""
    rows = [row for row in summary if row.estimator == estimator]
    if len(rows) < 3:
        raise ValueError(f"need at least 3 sweep points for a slope, "
                         f"got {len(rows)} for {estimator!r}")
    ns = np.array([row.n for row in rows], dtype=float)
    errs = np.array([row.mean_mse for row in rows], dtype=float)
    if np.any(errs <= 0):
        raise ValueError("slope needs strictly positive MSE values")
    return float(np.polyfit(np.log(ns), np.log(errs), 1)[0])


def _format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _record_sort_key(r: ExperimentRecord):
    tuning = float("-inf") if r.tuning_value is None else float(r.tuning_value)
    return (r.family, r.d, r.n, r.sigma, r.estimator, tuning, r.replicate)


def emit_csv(records, path) -> None:
    """Write records in canonical order; header row then one row per record.

    Column order is :data:`CSV_COLUMNS`; floats are written with their
    shortest round-trip representation, missing values as empty fields.
    Wall times are volatile and live outside this file by design, so two
    runs of the same config emit byte-identical output.
    """
    rows = sorted(records, key=_record_sort_key)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(CSV_COLUMNS) + "\n")
        for r in rows:
            fh.write(",".join(_format_value(getattr(r, col))
                              for col in CSV_COLUMNS) + "\n")


def emit_summary(summary, path) -> None:
    """Write oracle-tuned summary rows, same conventions as :func:`emit_csv`."""
    rows = sorted(summary, key=lambda s: (s.family, s.d, s.n, s.sigma, s.estimator))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(SUMMARY_COLUMNS) + "\n")
        for s in rows:
            fh.write(",".join(_format_value(getattr(s, col))
                              for col in SUMMARY_COLUMNS) + "\n")


def emit_timings(records, path) -> None:
    """Optional sidecar with per-row wall times (not byte-stable)."""
    rows = sorted(records, key=_record_sort_key)
    cols = CSV_COLUMNS[:7] + ("wall_time",)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(cols) + "\n")
        for r in rows:
            fh.write(",".join(_format_value(getattr(r, col))
                              for col in cols) + "\n")


def parse_config_file(path) -> dict:
    """Flat ``key=value`` config text; '#' starts a comment line."""
    mapping = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            key, _, value = line.partition("=")
            mapping[key.strip()] = value.strip()
    return mapping


def config_from_mapping(mapping: dict) -> ExperimentConfig:
    """Build a config from string key/values (file or CLI provenance)."""
    def split(value):
        return tuple(part.strip() for part in str(value).split(",") if part.strip())

    known = {
        "family": str,
        "d": int,
        "side_lengths": lambda v: tuple(int(s) for s in split(v)),
        "sigma": float,
        "replicates": int,
        "estimators": split,
        "grid_points": int,
        "grid_span": float,
        "base_seed": int,
        "output": str,
        "gap_tol": float,
        "max_iter": int,
    }
    kwargs = {}
    for key, value in mapping.items():
        if key not in known:
            raise ValueError(f"unknown config key {key!r}")
        kwargs[key] = known[key](value)
    for required in ("family", "d", "side_lengths", "sigma"):
        if required not in kwargs:
            raise ValueError(f"missing required config key {required!r}")
    return ExperimentConfig(**kwargs)
