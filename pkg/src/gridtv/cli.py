"""Command-line interface.

Subcommands: ``sweep`` runs rate experiments and writes CSVs, ``image``
drives the PGM pipeline, ``bounds`` prints the closed-form bound values
for given problem parameters, ``selftest`` runs quick invariant suites.

Exit codes: 0 success, 1 usage error, 2 I/O error, 3 solver
non-convergence in strict mode.
"""

from __future__ import annotations

import argparse
import sys

from . import selfcheck
from .estimators import EstimatorConfig
from .experiment import (config_from_mapping, emit_csv, emit_summary,
                         emit_timings, parse_config_file, run_experiment,
                         slope_estimate)
from .image import denoise_image
from .theory import (ball_embedding_check, birge_massart_rho, canonical_radii,
                     mean_estimator_risk_bound, minimax_linear_tv_lower,
                     minimax_sobolev_lower, minimax_tv_lower, pinv_max_col_norm,
                     recommended_k, recommended_lambda_ls, recommended_lambda_tv,
                     PINV_NODE_LIMIT)
from .grid import GridShape

USAGE_ERROR, IO_ERROR, NONCONVERGENCE = 1, 2, 3


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; the contract here is 1
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


class UsageError(Exception):
    pass


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gridtv", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="run an MSE-vs-n rate experiment")
    sweep.add_argument("--config", help="key=value config file")
    sweep.add_argument("--family", choices=("one_hot", "linear",
                                            "piecewise_constant"))
    sweep.add_argument("--d", type=int)
    sweep.add_argument("--side-lengths", dest="side_lengths",
                       help="comma-separated increasing side lengths")
    sweep.add_argument("--sigma", type=float)
    sweep.add_argument("--replicates", type=int)
    sweep.add_argument("--estimators", help="comma-separated estimator names")
    sweep.add_argument("--grid-points", dest="grid_points", type=int)
    sweep.add_argument("--grid-span", dest="grid_span", type=float)
    sweep.add_argument("--base-seed", dest="base_seed", type=int)
    sweep.add_argument("--output", help="records CSV path")
    sweep.add_argument("--gap-tol", dest="gap_tol", type=float)
    sweep.add_argument("--max-iter", dest="max_iter", type=int)
    sweep.add_argument("--summary-output", help="summary CSV path "
                       "(default: <output>.summary.csv)")
    sweep.add_argument("--timings-output", help="optional wall-time sidecar")
    sweep.add_argument("--strict", action="store_true",
                       help="exit 3 if any TV solve failed to certify")

    image = sub.add_parser("image", help="denoise a binary PGM image")
    image.add_argument("--input", required=True)
    image.add_argument("--output", required=True)
    image.add_argument("--estimator", required=True,
                       choices=("tv", "laplacian_smoothing",
                                "laplacian_eigenmaps", "mean", "identity"))
    image.add_argument("--lam", type=float, help="penalty for tv / smoothing")
    image.add_argument("--k", type=int, help="eigenvector count for eigenmaps")
    image.add_argument("--sigma", type=float, default=0.0,
                       help="noise to add before denoising (0: input is "
                            "already noisy)")
    image.add_argument("--seed", type=int, default=0)
    image.add_argument("--clean", help="clean reference PGM for the MSE report")
    image.add_argument("--gap-tol", dest="gap_tol", type=float, default=1e-6)
    image.add_argument("--max-iter", dest="max_iter", type=int, default=10_000)
    image.add_argument("--strict", action="store_true")

    bounds = sub.add_parser("bounds", help="print the closed-form bound values")
    bounds.add_argument("--n", type=int, required=True)
    bounds.add_argument("--d", type=int, required=True)
    bounds.add_argument("--sigma", type=float, default=1.0)
    bounds.add_argument("--tv-radius", dest="tv_radius", type=float,
                        help="default: canonical n^(1-1/d)")
    bounds.add_argument("--sobolev-radius", dest="sobolev_radius", type=float,
                        help="default: canonical n^(1/2-1/d)")
    bounds.add_argument("--c", type=float, default=1.0,
                        help="universal constant for the rate bounds")
    bounds.add_argument("--pinv", action="store_true",
                        help="also compute the dense pseudoinverse column "
                             "norm (slow, needs n <= %d)" % PINV_NODE_LIMIT)

    selftest = sub.add_parser("selftest", help="run quick invariant suites")
    selftest.add_argument("--seed", type=int, default=0)
    return parser


def _cmd_sweep(args) -> int:
    mapping = {}
    if args.config:
        mapping.update(parse_config_file(args.config))
    for key in ("family", "d", "side_lengths", "sigma", "replicates",
                "estimators", "grid_points", "grid_span", "base_seed",
                "output", "gap_tol", "max_iter"):
        value = getattr(args, key)
        if value is not None:
            mapping[key] = str(value)
    config = config_from_mapping(mapping)
    result = run_experiment(config)

    if config.output:
        emit_csv(result.records, config.output)
        summary_path = args.summary_output or config.output + ".summary.csv"
        emit_summary(result.summary, summary_path)
        print(f"wrote {len(result.records)} records to {config.output}")
        print(f"wrote {len(result.summary)} summary rows to {summary_path}")
    if args.timings_output:
        emit_timings(result.records, args.timings_output)

    print(f"{'estimator':>22} {'n':>8} {'tuning':>12} {'mean_mse':>12}")
    for row in result.summary:
        tuning = "-" if row.tuning_value is None else f"{row.tuning_value:.6g}"
        print(f"{row.estimator:>22} {row.n:>8} {tuning:>12} "
              f"{row.mean_mse:>12.6g}")
    sweep_points = len(config.side_lengths)
    if sweep_points >= 3:
        for estimator in config.estimators:
            try:
                slope = slope_estimate(result.summary, estimator)
            except ValueError:
                continue
            print(f"log-log slope[{estimator}] = {slope:+.3f}")
    if result.nonconverged:
        print(f"warning: {result.nonconverged} TV solves did not certify "
              f"their gap tolerance", file=sys.stderr)
        if args.strict:
            return NONCONVERGENCE
    return 0


def _cmd_image(args) -> int:
    kwargs = {"family": args.estimator, "gap_tol": args.gap_tol,
              "max_iter": args.max_iter}
    if args.estimator in ("tv", "laplacian_smoothing"):
        if args.lam is None:
            raise UsageError(f"--lam is required for {args.estimator}")
        kwargs["lam"] = args.lam
    elif args.lam is not None:
        raise UsageError(f"--lam is not accepted for {args.estimator}")
    if args.estimator == "laplacian_eigenmaps":
        if args.k is None:
            raise UsageError("--k is required for laplacian_eigenmaps")
        kwargs["k"] = args.k
    elif args.k is not None:
        raise UsageError(f"--k is not accepted for {args.estimator}")
    config = EstimatorConfig(**kwargs)
    report = denoise_image(args.input, args.output, config, args.sigma,
                           seed=args.seed, clean_path=args.clean)
    print(f"{report.width}x{report.height} maxval={report.maxval} "
          f"estimator={report.estimator} tuning={report.tuning}")
    if report.mse_noisy is not None:
        print(f"mse noisy:    {report.mse_noisy:.6g}")
    if report.mse_denoised is not None:
        print(f"mse denoised: {report.mse_denoised:.6g}")
    if report.solver_gap is not None:
        print(f"solver gap:   {report.solver_gap:.3g} "
              f"(converged: {report.solver_converged})")
    if args.strict and not report.solver_converged:
        return NONCONVERGENCE
    return 0


def _cmd_bounds(args) -> int:
    n, d, sigma, c = args.n, args.d, args.sigma, args.c
    radii = canonical_radii(n, d)
    tv_radius = args.tv_radius if args.tv_radius is not None else radii.tv_radius
    sobolev_radius = (args.sobolev_radius if args.sobolev_radius is not None
                      else radii.sobolev_radius)
    d_max = 2 * d
    print(f"n={n} d={d} sigma={sigma} c={c}")
    print(f"canonical tv radius:       {radii.tv_radius:.6g}")
    print(f"canonical sobolev radius:  {radii.sobolev_radius:.6g}")
    print(f"rho_1 (p=1 root):          {birge_massart_rho(1.0):.12g}")
    tv_low = minimax_tv_lower(n, d_max, tv_radius, sigma, c)
    print(f"tv minimax lower:          {tv_low.value:.6g} [{tv_low.regime}]")
    lin_low = minimax_linear_tv_lower(n, d_max, tv_radius, sigma)
    print(f"tv minimax-linear lower:   {lin_low.value:.6g} [{lin_low.regime}]")
    sob_low = minimax_sobolev_lower(n, d, sobolev_radius, sigma, c)
    print(f"sobolev minimax lower:     {sob_low.value:.6g} [{sob_low.regime}]")
    from .theory import sobolev_upper_le
    sob_up = sobolev_upper_le(n, d, sobolev_radius, sigma, c)
    print(f"sobolev upper (le/ls):     {sob_up.value:.6g} [{sob_up.regime}]")
    print(f"recommended k:             {recommended_k(n, d, sobolev_radius)}")
    print(f"recommended lambda (ls):   "
          f"{recommended_lambda_ls(n, d, sobolev_radius):.6g}")
    if d >= 2:
        print(f"recommended lambda (tv):   {recommended_lambda_tv(n, d):.6g}")
    if args.pinv:
        shape = GridShape.cube(round(n ** (1.0 / d)), d)
        m_n = pinv_max_col_norm(shape)
        print(f"pinv max column norm M_n:  {m_n:.6g} "
              f"(grid {shape.side_lengths})")
        print(f"mean-estimator risk bound: "
              f"{mean_estimator_risk_bound(shape.n, tv_radius, m_n, sigma):.6g}")
    return 0


def _cmd_selftest(args) -> int:
    return selfcheck.run_all(seed=args.seed)


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "image":
            return _cmd_image(args)
        if args.command == "bounds":
            return _cmd_bounds(args)
        return _cmd_selftest(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return IO_ERROR


if __name__ == "__main__":
    sys.exit(main())
