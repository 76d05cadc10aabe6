"""Classical sparse-regression comparators.

LASSO and SCAD are fit by cyclic coordinate descent on columns rescaled to
``||x_j||^2 = N``; coefficients are mapped back to the original column scale
on return. Both use the half-loss convention, i.e. they minimize

    (1/N) ||y - X b||^2 + 2 * sum_j pen(|b_j|)

which makes the orthogonal-design solutions the textbook thresholding rules.
"""

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import InstanceTooLargeError, InvalidArgumentError, SingularSystemError
from .solver import extract_support

EXHAUSTIVE_LIMIT = 10 ** 6


@dataclass(frozen=True)
class LassoConfig:
    lam: float = 0.1
    max_iters: int = 1000
    tol: float = 1e-8


@dataclass(frozen=True)
class ScadConfig:
    lam: float = 0.1
    a: float = 3.7
    max_iters: int = 1000
    tol: float = 1e-8

    def __post_init__(self):
        if not self.a > 2:
            raise InvalidArgumentError(f"SCAD requires a > 2, got {self.a}")


@dataclass(frozen=True)
class RandOmpConfig:
    runs: int = 10
    temperature: float = 1.0


@dataclass(frozen=True)
class BaselineConfig:
    lasso: LassoConfig = field(default_factory=LassoConfig)
    scad: ScadConfig = field(default_factory=ScadConfig)
    rand_omp: RandOmpConfig = field(default_factory=RandOmpConfig)
    seed: int = 0


def soft_threshold(z, t):
    return np.sign(z) * np.maximum(np.abs(z) - t, 0.0)


def scad_penalty(beta, lam, a=3.7):
    t = np.abs(np.asarray(beta, dtype=float))
    mid = (2 * a * lam * t - t * t - lam * lam) / (2 * (a - 1))
    return np.where(t <= lam, lam * t,
                    np.where(t <= a * lam, mid, lam * lam * (a + 1) / 2))


def scad_threshold(z, lam, a=3.7):
    """Minimizer of ``0.5 (b - z)^2 + scad_penalty(b)``."""
    z = np.asarray(z, dtype=float)
    az = np.abs(z)
    blend = ((a - 1) * z - np.sign(z) * a * lam) / (a - 2)
    return np.where(az <= 2 * lam, soft_threshold(z, lam),
                    np.where(az <= a * lam, blend, z))


def _scaled_columns(X):
    N = X.shape[0]
    scale = np.sqrt(np.sum(X * X, axis=0) / N)
    if np.any(scale == 0):
        raise InvalidArgumentError("design has all-zero columns")
    return X / scale, scale


def _coordinate_descent(X, y, threshold, penalty, beta0, max_iters, tol):
    N, D = X.shape
    Xs, scale = _scaled_columns(X)
    beta = np.zeros(D) if beta0 is None else beta0 * scale
    r = y - Xs @ beta

    def objective(b, res):
        return float(res @ res / N + 2.0 * np.sum(penalty(b)))

    history = [objective(beta, r)]
    converged = False
    n_iter = 0
    for n_iter in range(1, max_iters + 1):
        biggest = 0.0
        for j in range(D):
            xj = Xs[:, j]
            old = beta[j]
            new = float(threshold(old + xj @ r / N))
            if new != old:
                r -= (new - old) * xj
                beta[j] = new
                biggest = max(biggest, abs(new - old))
        history.append(objective(beta, r))
        if biggest < tol:
            converged = True
            break
    info = {"converged": converged, "n_iter": n_iter, "objective": history}
    return beta / scale, info


def lasso_fit(X, y, lam, max_iters=1000, tol=1e-8, return_info=False):
    """LASSO by cyclic coordinate descent with soft thresholding.

    ``info["converged"]`` is False when ``max_iters`` sweeps did not bring the
    largest coordinate change under ``tol``.
    """
    if lam < 0:
        raise InvalidArgumentError(f"lam must be >= 0, got {lam}")
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    beta, info = _coordinate_descent(
        X, y, lambda z: soft_threshold(z, lam), lambda b: lam * np.abs(b),
        None, max_iters, tol)
    return (beta, info) if return_info else beta


def scad_fit(X, y, lam, a=3.7, max_iters=1000, tol=1e-8, return_info=False):
    """SCAD-penalized least squares, warm-started from the LASSO solution."""
    if lam < 0:
        raise InvalidArgumentError(f"lam must be >= 0, got {lam}")
    if not a > 2:
        raise InvalidArgumentError(f"SCAD requires a > 2, got {a}")
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    start = lasso_fit(X, y, lam, max_iters, tol)
    beta, info = _coordinate_descent(
        X, y, lambda z: scad_threshold(z, lam, a), lambda b: scad_penalty(b, lam, a),
        start, max_iters, tol)
    return (beta, info) if return_info else beta


def _least_squares(X, y, active):
    Xa = X[:, active]
    coef, _, rank, _ = np.linalg.lstsq(Xa, y, rcond=None)
    if rank < len(active):
        raise SingularSystemError(f"active set {sorted(active)} is rank deficient")
    return coef


def refit_residual(X, y, support):
    """Mean squared residual of the least-squares refit on ``support``."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    support = list(support)
    if not support:
        return float(y @ y / len(y))
    coef, *_ = np.linalg.lstsq(X[:, support], y, rcond=None)
    r = y - X[:, support] @ coef
    return float(r @ r / len(y))


def _greedy_pursuit(X, y, K, pick):
    N, D = X.shape
    norms = np.linalg.norm(X, axis=0)
    if np.any(norms == 0):
        raise InvalidArgumentError("design has all-zero columns")
    active = []
    beta = np.zeros(D)
    r = y.copy()
    for _ in range(K):
        corr = (X.T @ r) / norms
        corr[active] = 0.0
        j = pick(corr, r, active)
        active.append(j)
        coef = _least_squares(X, y, active)
        r = y - X[:, active] @ coef
    if active:
        beta[active] = coef
    return beta, active


def omp_fit(X, y, K):
    """Orthogonal matching pursuit with K greedy steps.

    Returns ``(beta, support)`` with ``support`` a sorted tuple.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if not 0 <= K <= X.shape[1]:
        raise InvalidArgumentError(f"K={K} out of range for D={X.shape[1]}")

    def pick(corr, r, active):
        return int(np.argmax(np.abs(corr)))

    beta, active = _greedy_pursuit(X, y, K, pick)
    return beta, tuple(sorted(active))


def rand_omp_fit(X, y, K, J=10, temperature=1.0, rng=None):
    """Randomized OMP averaged over ``J`` passes.

    Each step samples the next atom with probability proportional to
    ``exp(c_d^2 / (2 * temperature * s2))``, where ``c_d`` is the correlation
    of the unit-norm column with the residual and ``s2 = ||r||^2 / N`` is the
    current residual variance. Selected atoms are excluded from later steps.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    N, D = X.shape
    if not 0 <= K <= D:
        raise InvalidArgumentError(f"K={K} out of range for D={D}")
    if J < 1 or not temperature > 0:
        raise InvalidArgumentError("need J >= 1 and temperature > 0")
    rng = np.random.default_rng() if rng is None else rng

    def pick(corr, r, active):
        s2 = float(r @ r) / N
        if not s2 > 0:
            return int(np.argmax(np.abs(corr)))
        logits = corr * corr / (2.0 * temperature * s2)
        logits[active] = -np.inf
        w = np.exp(logits - logits.max())
        cdf = np.cumsum(w)
        j = int(np.searchsorted(cdf, rng.random() * cdf[-1], side="right"))
        return min(j, D - 1)

    total = np.zeros(D)
    for _ in range(J):
        beta, _ = _greedy_pursuit(X, y, K, pick)
        total += beta
    avg = total / J
    return avg, extract_support(avg, K)


def exhaustive_best_subset(X, y, K):
    """Brute-force l0-constrained least squares over all K-subsets.

    Ties (within relative 1e-9) keep the lexicographically smallest subset.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    D = X.shape[1]
    if not 0 <= K <= D:
        raise InvalidArgumentError(f"K={K} out of range for D={D}")
    if math.comb(D, K) > EXHAUSTIVE_LIMIT:
        raise InstanceTooLargeError(
            f"C({D},{K}) = {math.comb(D, K)} subsets exceeds the limit of {EXHAUSTIVE_LIMIT}")
    best, best_res = (), math.inf
    for subset in itertools.combinations(range(D), K):
        res = refit_residual(X, y, subset)
        if res < best_res * (1.0 - 1e-9):
            best, best_res = subset, res
    return tuple(best)
