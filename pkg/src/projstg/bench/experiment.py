"""Seeded support-recovery sweeps.

Every random quantity in a sweep is drawn from a stream whose seed is a hash of
``(master_seed, grid value, trial, role)``, so results do not depend on how
trials are scheduled across worker processes.
"""

import hashlib
import logging
import math
from concurrent.futures import ProcessPoolExecutor

import numpy as np
from scipy.optimize import isotonic_regression

from ..baselines import lasso_fit, omp_fit, rand_omp_fit, scad_fit
from ..exceptions import InvalidArgumentError, SweepHealthError
from ..linmodel import DesignSpec, LinearDataset, generate_dataset, generate_signal
from ..metrics import CurvePoint, TrialRecord, bootstrap_band, score_trial
from ..solver import SolverConfig, extract_support, fit_plain_stg, fit_projected_stg
from .config import STG_METHODS

log = logging.getLogger(__name__)


def child_seed(*parts):
    """63-bit seed from a SHA-256 digest of the joined parts."""
    digest = hashlib.sha256("|".join(str(p) for p in parts).encode()).digest()
    return int.from_bytes(digest[:8], "big") >> 1


def lambda_base(sigma, D, K, N):
    """Reference level ``sqrt(2 sigma^2 log(D-K) log(K) / N)`` (natural logs)."""
    if K <= 1 or D - K <= 1:
        raise InvalidArgumentError(f"lambda base needs D - K > 1 and K > 1, got D={D}, K={K}")
    if N < 1 or sigma < 0:
        raise InvalidArgumentError("need N >= 1 and sigma >= 0")
    return math.sqrt(2.0 * sigma * sigma * math.log(D - K) * math.log(K) / N)


def _lambda0(sigma, D, K, N, k_floor):
    return lambda_base(sigma, D, max(K, k_floor), N)


def cv_folds(N, folds):
    """Contiguous row blocks; the same split is used for every candidate C."""
    if folds < 2 or N < folds:
        raise InvalidArgumentError(f"need 2 <= folds <= N, got folds={folds}, N={N}")
    return np.array_split(np.arange(N), folds)


def cv_errors(data, K, C_grid, folds=5, solver=None, k_floor=2, method="ProjSTG"):
    """Mean held-out squared prediction error for each distinct C.

    The fold fit uses ``lam = C * lambda_base`` at the training-fold size.
    Fits that fail (singular system, divergence) score ``inf``.
    """
    solver = solver or SolverConfig()
    fit = fit_projected_stg if method == "ProjSTG" else fit_plain_stg
    X, y = np.asarray(data.X, float), np.asarray(data.y, float)
    N, D = X.shape
    blocks = cv_folds(N, folds)
    errors = {}
    for C in sorted(set(float(c) for c in C_grid)):
        total = 0.0
        for held in blocks:
            train = np.setdiff1d(np.arange(N), held)
            sub = LinearDataset(X=X[train], y=y[train], sigma=data.sigma)
            lam = C * _lambda0(data.sigma, D, K, len(train), k_floor)
            try:
                beta = fit(sub, K, solver.with_(lam=lam)).beta_hat
            except (ArithmeticError, np.linalg.LinAlgError) as exc:
                log.debug("CV fit failed at C=%g: %s", C, exc)
                total = math.inf
                break
            resid = y[held] - X[held] @ beta
            total += float(resid @ resid) / len(held)
        errors[C] = total / len(blocks)
    return errors


def select_C(data, K, C_grid, folds=5, solver=None, k_floor=2, method="ProjSTG"):
    """Cross-validated multiplier for ``lambda_base``; ties go to the smaller C."""
    grid = sorted(set(float(c) for c in C_grid))
    if not grid:
        raise InvalidArgumentError("C_grid is empty")
    if len(grid) == 1:
        return grid[0]
    if data.X.shape[0] // folds < 1:
        raise InvalidArgumentError("a CV fold would be empty")
    return best_C(cv_errors(data, K, grid, folds, solver, k_floor, method))


def best_C(errors):
    """Smallest-error C from a ``{C: error}`` mapping, ties to the smaller C."""
    grid = sorted(errors)
    best = grid[0]
    for C in grid[1:]:
        if errors[C] < errors[best]:
            best = C
    return best


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

def make_trial_data(cfg, x, trial):
    N, K = cfg.point(x)
    seed = child_seed(cfg.master_seed, x, trial, "data")
    rng = np.random.default_rng(seed)
    signal = generate_signal(cfg.D, K, rng)
    spec = DesignSpec(cfg.ensemble, N, cfg.D, cfg.rho)
    return generate_dataset(spec, signal, cfg.sigma, rng), seed


def _select_for_point(args):
    cfg, x = args
    N, K = cfg.point(x)
    rng = np.random.default_rng(child_seed(cfg.master_seed, x, "cv-pilot"))
    signal = generate_signal(cfg.D, K, rng)
    pilot = generate_dataset(DesignSpec(cfg.ensemble, N, cfg.D, cfg.rho), signal, cfg.sigma, rng)
    rule = cfg.lambda_rule
    solver = cfg.solver.with_(seed=child_seed(cfg.master_seed, x, "cv-solver"))
    return select_C(pilot, K, rule.C_grid, rule.cv_folds, solver, rule.k_floor)


def _fit_method(method, data, K, cfg, C, seed):
    lam0 = _lambda0(data.sigma, data.D, K, data.N, cfg.lambda_rule.k_floor)
    if method in STG_METHODS:
        fit = fit_projected_stg if method == "ProjSTG" else fit_plain_stg
        res = fit(data, K, cfg.solver.with_(lam=C * lam0, seed=seed))
        return res.beta_hat, res.support_hat
    if method == "LASSO":
        beta = lasso_fit(data.X, data.y, lam0, cfg.lasso.max_iters, cfg.lasso.tol)
        return beta, extract_support(beta, K)
    if method == "SCAD":
        beta = scad_fit(data.X, data.y, lam0, cfg.scad.a, cfg.scad.max_iters, cfg.scad.tol)
        return beta, extract_support(beta, K)
    if method == "OMP":
        return omp_fit(data.X, data.y, K)
    if method == "RandOMP":
        return rand_omp_fit(data.X, data.y, K, cfg.rand_omp.runs, cfg.rand_omp.temperature,
                            np.random.default_rng(seed))
    raise InvalidArgumentError(f"unknown method {method!r}")


def _run_trial(args):
    cfg, x, trial, C = args
    N, K = cfg.point(x)
    data, data_seed = make_trial_data(cfg, x, trial)
    out = []
    for method in cfg.methods:
        seed = child_seed(cfg.master_seed, x, trial, method)
        try:
            beta, support = _fit_method(method, data, K, cfg, C, seed)
        except (ArithmeticError, ValueError, np.linalg.LinAlgError) as exc:
            out.append(TrialRecord(method, x, N, cfg.D, K, cfg.sigma, data_seed,
                                   False, 0.0, 0.0, float("nan"),
                                   error=f"{type(exc).__name__}: {exc}"))
            continue
        s = score_trial(support, data.truth.support, beta, data.truth.beta)
        out.append(TrialRecord(method, x, N, cfg.D, K, cfg.sigma, data_seed,
                               s.recovered, s.tpr, s.fdr, s.l2_error))
    return out


def _map(fn, items, workers):
    if workers <= 1:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))


def choose_constants(cfg, workers=1):
    """Lambda multiplier C per grid value (1.0 when no STG method runs)."""
    rule = cfg.lambda_rule
    if rule.C is not None:
        return {x: float(rule.C) for x in cfg.grid}
    if not any(m in STG_METHODS for m in cfg.methods):
        return {x: 1.0 for x in cfg.grid}
    if rule.cv_scope == "once":
        C = _select_for_point((cfg, cfg.grid[0]))
        return {x: C for x in cfg.grid}
    chosen = _map(_select_for_point, [(cfg, x) for x in cfg.grid], workers)
    return dict(zip(cfg.grid, chosen))


def run_experiment(cfg, workers=1):
    """Run a sweep and return ``(records, curves)`` in grid-major, method-minor order."""
    constants = choose_constants(cfg, workers)
    for x, C in constants.items():
        log.info("%s=%s: C=%g", cfg.x_label, x, C)
    tasks = [(cfg, x, t, constants[x]) for x in cfg.grid for t in range(cfg.trials)]
    results = _map(_run_trial, tasks, workers)

    by_point = {}
    for (_, x, t, _), recs in zip(tasks, results):
        for rec in recs:
            by_point.setdefault((x, rec.method), []).append((t, rec))

    records, curves = [], []
    for x in cfg.grid:
        failed = sum(1 for m in cfg.methods for _, r in by_point[(x, m)] if r.error)
        total = len(cfg.methods) * cfg.trials
        if failed > cfg.max_failure_rate * total:
            raise SweepHealthError(
                f"{failed}/{total} failed trials at {cfg.x_label}={x}")
        for m in cfg.methods:
            recs = [r for _, r in sorted(by_point[(x, m)], key=lambda p: p[0])]
            records.extend(recs)
            rng = np.random.default_rng(child_seed(cfg.master_seed, x, m, "bootstrap"))
            rate, lo, hi = bootstrap_band([r.recovered for r in recs], cfg.bootstrap_level,
                                          cfg.bootstrap_B, rng)
            curves.append(CurvePoint(m, x, rate, lo, hi, len(recs)))
    return records, curves


def success_by_method(curves):
    out = {}
    for c in curves:
        out.setdefault(c.method, {})[c.x] = c.success_rate
    return out


def isotonic_deviation(rates):
    """Mean absolute gap between rates and their nondecreasing isotonic fit."""
    rates = np.asarray(rates, dtype=float)
    fit = isotonic_regression(rates, increasing=True).x
    return float(np.mean(np.abs(fit - rates)))
