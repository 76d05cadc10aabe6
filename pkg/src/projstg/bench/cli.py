"""Command-line entry point: ``projstg {sweep,fit,cv,oracle}``.

Exit codes: 0 success, 2 configuration error, 3 sweep-health error, 4 I/O error.
"""

import argparse
import csv
import dataclasses
import json
import logging
import sys
from pathlib import Path

import numpy as np

from ..baselines import exhaustive_best_subset, lasso_fit, omp_fit, rand_omp_fit, scad_fit
from ..exceptions import ConfigError, DatasetLoadError, InvalidArgumentError, SweepHealthError
from ..linmodel import load_csv_dataset
from ..solver import SolverConfig, extract_support, fit_plain_stg, fit_projected_stg
from .config import DEFAULT_C_GRID, METHODS, from_dict, load_config
from .experiment import _lambda0, best_C, cv_errors, run_experiment
from .output import emit_curves_csv, emit_plot, emit_records_csv, fmt

EXIT_OK, EXIT_CONFIG, EXIT_HEALTH, EXIT_IO = 0, 2, 3, 4

log = logging.getLogger("projstg")


def _global_flags(parser, suppress):
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--seed", type=int, default=default(None),
                        help="master seed (overrides the config file)")
    parser.add_argument("--threads", type=int, default=default(1),
                        help="worker processes for independent trials")
    parser.add_argument("--out-dir", type=Path, default=default(Path(".")))
    parser.add_argument("--config", type=Path, default=default(None),
                        help="JSON experiment config")
    parser.add_argument("-v", "--verbose", action="store_true", default=default(False))


def _dataset_args(p):
    p.add_argument("dataset", type=Path, help="numeric CSV file")
    p.add_argument("--response", default="-1",
                   help="response column name or 0-based index (default: last)")
    p.add_argument("--standardize", action="store_true")
    p.add_argument("-K", "--K", type=int, required=True, dest="K")


def build_parser():
    parser = argparse.ArgumentParser(prog="projstg", description=__doc__.splitlines()[0])
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="run a support-recovery sweep, write CSV + SVG")
    _global_flags(p, suppress=True)
    p.add_argument("--trials", type=int)
    p.add_argument("--grid", type=lambda s: [int(v) for v in s.split(",")])
    p.add_argument("--methods", type=lambda s: s.split(","))
    p.add_argument("--sigma", type=float)
    p.add_argument("--C", type=float, dest="C", help="fixed lambda multiplier (skips CV)")

    p = sub.add_parser("fit", help="fit one dataset; write coefficients and support")
    _global_flags(p, suppress=True)
    _dataset_args(p)
    p.add_argument("--method", choices=METHODS, default="ProjSTG")
    p.add_argument("--lam", type=float, help="penalty level (default: C * lambda base)")
    p.add_argument("--C", type=float, default=1.0, dest="C")
    p.add_argument("--sigma", type=float, help="noise level for the lambda base")

    p = sub.add_parser("cv", help="report the cross-validated lambda multiplier")
    _global_flags(p, suppress=True)
    _dataset_args(p)
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--C-grid", type=lambda s: [float(v) for v in s.split(",")], dest="C_grid")
    p.add_argument("--folds", type=int)

    p = sub.add_parser("oracle", help="exhaustive best-subset search (tiny instances)")
    _global_flags(p, suppress=True)
    _dataset_args(p)
    return parser


def _raw_config(args):
    if args.config is None:
        return None
    try:
        return json.loads(args.config.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{args.config}: invalid JSON ({exc})") from exc


def _solver_from(args):
    raw = _raw_config(args) or {}
    if "solver" not in raw:
        return SolverConfig(seed=args.seed or 0), raw
    cfg = from_dict({"sweep": "VaryN", "solver": raw["solver"]}).solver
    return cfg.with_(seed=args.seed if args.seed is not None else cfg.seed), raw


def cmd_sweep(args):
    if args.config is None:
        raise ConfigError("sweep needs --config")
    cfg = load_config(args.config)
    changes = {}
    if args.seed is not None:
        changes["master_seed"] = args.seed
    for key in ("trials", "methods", "sigma"):
        if getattr(args, key, None) is not None:
            changes[key] = tuple(args.methods) if key == "methods" else getattr(args, key)
    if args.grid is not None:
        changes["grid"] = tuple(args.grid)
    if args.C is not None:
        changes["lambda_rule"] = dataclasses.replace(cfg.lambda_rule, C=args.C)
    try:
        cfg = cfg.replace(**changes)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc

    records, curves = run_experiment(cfg, workers=args.threads)
    out = args.out_dir
    out.mkdir(parents=True, exist_ok=True)
    emit_records_csv(records, out / "records.csv")
    emit_curves_csv(curves, out / "curves.csv")
    emit_plot(curves, out / "curves.svg", x_label=cfg.x_label,
              title=f"{cfg.sweep}, D={cfg.D}, sigma={cfg.sigma:g}")
    for c in curves:
        print(f"{c.method:8s} {cfg.x_label}={fmt(c.x):>4s}  success={c.success_rate:.3f} "
              f"[{c.ci_low:.3f}, {c.ci_high:.3f}]")
    return EXIT_OK


def _load(args):
    return load_csv_dataset(args.dataset, args.response, standardize=args.standardize)


def cmd_fit(args):
    data = _load(args)
    solver, _ = _solver_from(args)
    K = args.K
    if args.lam is not None:
        lam = args.lam
    else:
        if args.sigma is None:
            raise ConfigError("fit needs --lam, or --sigma to derive the lambda base")
        lam = args.C * _lambda0(args.sigma, data.D, K, data.N, 2)
    method = args.method
    if method in ("ProjSTG", "PlainSTG"):
        fit = fit_projected_stg if method == "ProjSTG" else fit_plain_stg
        beta = fit(data, K, solver.with_(lam=lam)).beta_hat
    elif method == "LASSO":
        beta = lasso_fit(data.X, data.y, lam)
    elif method == "SCAD":
        beta = scad_fit(data.X, data.y, lam)
    elif method == "OMP":
        beta, _ = omp_fit(data.X, data.y, K)
    else:
        beta, _ = rand_omp_fit(data.X, data.y, K, rng=np.random.default_rng(solver.seed))
    support = extract_support(beta, K)
    args.out_dir.mkdir(parents=True, exist_ok=True)
    path = args.out_dir / "fit.csv"
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["index", "column", "beta_hat", "selected"])
        for j, b in enumerate(beta):
            w.writerow([j, data.columns[j], fmt(float(b)), fmt(j in support)])
    print("support:", " ".join(data.columns[j] for j in support))
    return EXIT_OK


def cmd_cv(args):
    data = _load(args)
    data.sigma = args.sigma
    solver, raw = _solver_from(args)
    rule = raw.get("lambda_rule", {})
    grid = args.C_grid or rule.get("C_grid") or list(DEFAULT_C_GRID)
    folds = args.folds or rule.get("cv_folds", 5)
    errors = cv_errors(data, args.K, grid, folds, solver)
    best = best_C(errors)
    for C, e in errors.items():
        print(f"C={C:.6g}  cv_error={e:.6g}{'  <- selected' if C == best else ''}")
    print(f"selected C: {best:.12g}")
    return EXIT_OK


def cmd_oracle(args):
    data = _load(args)
    support = exhaustive_best_subset(data.X, data.y, args.K)
    args.out_dir.mkdir(parents=True, exist_ok=True)
    with (args.out_dir / "oracle.csv").open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["index", "column"])
        for j in support:
            w.writerow([j, data.columns[j]])
    print("support:", " ".join(data.columns[j] for j in support))
    return EXIT_OK


COMMANDS = {"sweep": cmd_sweep, "fit": cmd_fit, "cv": cmd_cv, "oracle": cmd_oracle}


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, InvalidArgumentError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SweepHealthError as exc:
        print(f"sweep health error: {exc}", file=sys.stderr)
        return EXIT_HEALTH
    except (OSError, DatasetLoadError) as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
