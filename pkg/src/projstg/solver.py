"""Projected-STG and plain STG solvers for gated sparse linear regression.

Both minimize the Monte Carlo estimate of

    E_z ||y - X (theta * z(mu))||^2 / N + lam * sum_d Phi(mu_d / tau)

over ``(theta, mu)``. Projected-STG replaces the ``theta`` gradient step by
the exact minimizer of the gated quadratic at the current gate moments,

    theta = (X^T X * Q)^{-1} ((X^T y) * q),

and only descends on ``mu`` (with Adam). Plain STG takes Adam steps on both.
"""

import enum
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.linalg.lapack import dpotrf, dpotrs

from .exceptions import DivergenceError, InvalidArgumentError, SingularSystemError
from .gates import (GateParams, clip_gates, draw_noise, exact_gate_mean, exact_gate_moments,
                    gate_penalty, gate_penalty_grad, norm_cdf)

MU_INIT = 0.5
MU_CAP = 1e3


class MomentMode(str, enum.Enum):
    MonteCarlo = "MonteCarlo"
    Exact = "Exact"


@dataclass(frozen=True)
class AdamConfig:
    learning_rate: float = 0.05
    decay1: float = 0.9
    decay2: float = 0.999
    epsilon: float = 1e-8

    def __post_init__(self):
        if not self.learning_rate >= 0:
            raise InvalidArgumentError("learning_rate must be >= 0")
        if not (0 < self.decay1 < 1 and 0 < self.decay2 < 1):
            raise InvalidArgumentError("Adam decay rates must lie in (0, 1)")
        if not self.epsilon > 0:
            raise InvalidArgumentError("Adam epsilon must be > 0")


@dataclass(frozen=True)
class SolverConfig:
    lam: float = 0.1
    tau: float = 0.5
    M: int = 20
    L: int = 20
    R: int = 1000
    adam: AdamConfig = field(default_factory=AdamConfig)
    moment_mode: MomentMode = MomentMode.MonteCarlo
    ridge_jitter: float = 1e-10
    seed: int = 0
    early_stop_tol: float = 1e-6
    early_stop_patience: int = 20

    def __post_init__(self):
        object.__setattr__(self, "moment_mode", MomentMode(self.moment_mode))
        if isinstance(self.adam, dict):
            object.__setattr__(self, "adam", AdamConfig(**self.adam))
        if not self.lam >= 0:
            raise InvalidArgumentError(f"lam must be >= 0, got {self.lam}")
        if not self.tau > 0:
            raise InvalidArgumentError(f"tau must be > 0, got {self.tau}")
        for name in ("M", "L", "R"):
            if getattr(self, name) < 1:
                raise InvalidArgumentError(f"{name} must be >= 1")
        if not self.ridge_jitter >= 0:
            raise InvalidArgumentError("ridge_jitter must be >= 0")

    def with_(self, **changes):
        return replace(self, **changes)


@dataclass
class SolverState:
    theta: np.ndarray
    mu: np.ndarray
    risk_trace: list = field(default_factory=list)


@dataclass
class FitResult:
    beta_hat: np.ndarray
    support_hat: tuple
    theta: np.ndarray
    mu: np.ndarray
    epochs_run: int
    final_risk: float
    risk_trace: list = field(default_factory=list, repr=False)


class Adam:
    """Adam on a single parameter vector; ``step`` returns the updated copy."""

    def __init__(self, lr=0.05, beta1=0.9, beta2=0.999, eps=1e-8):
        self.lr, self.beta1, self.beta2, self.eps = lr, beta1, beta2, eps
        self.m = None
        self.v = None
        self.t = 0

    @classmethod
    def from_config(cls, cfg):
        return cls(cfg.learning_rate, cfg.decay1, cfg.decay2, cfg.epsilon)

    def step(self, param, grad):
        if self.m is None:
            self.m = np.zeros_like(grad)
            self.v = np.zeros_like(grad)
        self.t += 1
        self.m = self.beta1 * self.m + (1.0 - self.beta1) * grad
        self.v = self.beta2 * self.v + (1.0 - self.beta2) * grad * grad
        m_hat = self.m / (1.0 - self.beta1 ** self.t)
        v_hat = self.v / (1.0 - self.beta2 ** self.t)
        return param - self.lr * m_hat / (np.sqrt(v_hat) + self.eps)


# ---------------------------------------------------------------------------
# closed-form theta update
# ---------------------------------------------------------------------------

def _cholesky_solve(A, b):
    c, info = dpotrf(A, lower=0, clean=0, overwrite_a=0)
    if info != 0:
        return None
    x, info = dpotrs(c, b, lower=0)
    if info != 0 or not np.all(np.isfinite(x)):
        return None
    return x


def solve_gated_system(XtX, Xty, q, Q, ridge_jitter=1e-10):
    """Solve ``(XtX * Q) theta = Xty * q`` by Cholesky, with a jitter fallback.

    On factorization failure the diagonal is lifted by
    ``ridge_jitter * mean(diag(A))``, then by ten times that. When every gate
    is closed ``A`` is zero; the scale then falls back to ``mean(diag(XtX))``.
    """
    A = XtX * Q
    b = Xty * q
    diag = np.diag(A)
    # A zero diagonal entry (a gate closed in every sample) can never factor.
    if diag.min() > 0:
        theta = _cholesky_solve(A, b)
        if theta is not None:
            return theta
    scale = float(np.mean(diag))
    if not scale > 0:
        scale = float(np.mean(np.diag(XtX)))
    step = A.shape[0] + 1
    for mult in (1.0, 10.0):
        lifted = A.copy()
        lifted.flat[::step] += mult * ridge_jitter * scale
        theta = _cholesky_solve(lifted, b)
        if theta is not None:
            return theta
    raise SingularSystemError(
        "gated normal equations are not positive definite (degenerate gates or zero columns)")


def projected_theta(X, y, moments, ridge_jitter=1e-10):
    """Exact minimizer over theta of the expected gated squared loss."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if moments.q.shape[0] != X.shape[1]:
        raise InvalidArgumentError("moments and design disagree on D")
    return solve_gated_system(X.T @ X, X.T @ y, moments.q, moments.Q, ridge_jitter)


def expected_data_risk(X, y, theta, moments):
    """``E_z ||y - X(theta*z)||^2 / N`` evaluated through the gate moments."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    XtX, Xty = X.T @ X, X.T @ y
    quad = theta @ ((XtX * moments.Q) @ theta)
    return float((y @ y - 2.0 * theta @ (Xty * moments.q) + quad) / X.shape[0])


# ---------------------------------------------------------------------------
# Monte Carlo risk and gradients
# ---------------------------------------------------------------------------

def frozen_risk(X, y, theta, mu, tau, lam, delta):
    """Penalized risk with the gate noise fixed to ``delta`` (shape ``(L, D)``)."""
    X = np.asarray(X, dtype=float)
    Z = clip_gates(np.asarray(mu, dtype=float), np.atleast_2d(delta))
    resid = y[None, :] - (Z * theta) @ X.T
    data = np.sum(resid * resid) / (X.shape[0] * Z.shape[0])
    return float(data + lam * gate_penalty(mu, tau))


def mc_risk(X, y, theta, mu, tau, lam, L, rng):
    """Monte Carlo penalized risk from ``L`` fresh gate vectors."""
    if L < 1:
        raise InvalidArgumentError(f"L must be >= 1, got {L}")
    delta = draw_noise(tau, L, len(mu), rng)
    return frozen_risk(X, y, theta, mu, tau, lam, delta)


def _data_terms(XtX, Xty, yy, N, theta, Z):
    """Per-sample ``X^T(X w - y)`` and the mean data risk for ``w = theta * z``."""
    W = Z * theta
    WA = W @ XtX
    G = WA - Xty
    sq = yy - 2.0 * (W @ Xty) + np.einsum("ij,ij->i", W, WA)
    return G, float(np.mean(sq)) / N


def _mu_grad(G, theta, mu, delta, N, tau, lam):
    s = mu + delta
    open_ = (s > 0.0) & (s < 1.0)
    data = (2.0 / N) * np.mean(G * open_, axis=0) * theta
    return data + lam * gate_penalty_grad(mu, tau)


def mu_gradient(X, y, theta, mu, tau, lam, delta):
    """Pathwise gradient of the frozen-noise risk with respect to ``mu``.

    ``dz_d/dmu_d`` is 1 strictly inside ``(0, 1)`` and 0 otherwise.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    mu = np.asarray(mu, dtype=float)
    delta = np.atleast_2d(delta)
    G, _ = _data_terms(X.T @ X, X.T @ y, y @ y, X.shape[0], theta, clip_gates(mu, delta))
    return _mu_grad(G, theta, mu, delta, X.shape[0], tau, lam)


def theta_gradient(X, y, theta, mu, delta):
    """Gradient of the frozen-noise data risk with respect to ``theta``."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    Z = clip_gates(np.asarray(mu, dtype=float), np.atleast_2d(delta))
    G, _ = _data_terms(X.T @ X, X.T @ y, y @ y, X.shape[0], theta, Z)
    return (2.0 / X.shape[0]) * np.mean(G * Z, axis=0)


# ---------------------------------------------------------------------------
# fitting
# ---------------------------------------------------------------------------

def extract_support(beta_hat, K):
    """Indices of the K largest ``|beta_hat|``; ties go to the lower index."""
    beta_hat = np.asarray(beta_hat, dtype=float)
    if not 0 <= K <= beta_hat.shape[0]:
        raise InvalidArgumentError(f"K={K} out of range for D={beta_hat.shape[0]}")
    order = np.argsort(-np.abs(beta_hat), kind="stable")
    return tuple(sorted(int(i) for i in order[:K]))


def _check_problem(data, K):
    X = np.asarray(data.X, dtype=float)
    y = np.asarray(data.y, dtype=float)
    D = X.shape[1]
    if not 0 <= K <= D:
        raise InvalidArgumentError(f"K={K} out of range for D={D}")
    zero = np.flatnonzero(~np.any(X != 0, axis=0))
    if zero.size:
        raise InvalidArgumentError(f"design has all-zero columns: {zero.tolist()}")
    return X, y


def _fit(data, K, config, projected, callback=None):
    X, y = _check_problem(data, K)
    N, D = X.shape
    XtX, Xty, yy = X.T @ X, X.T @ y, float(y @ y)
    cfg = config
    tau, lam = cfg.tau, cfg.lam
    exact = cfg.moment_mode is MomentMode.Exact

    moment_rng, risk_rng = (np.random.default_rng(s)
                            for s in np.random.SeedSequence(cfg.seed).spawn(2))
    mu = np.full(D, MU_INIT)
    theta = np.zeros(D)
    mu_opt = Adam.from_config(cfg.adam)
    theta_opt = Adam.from_config(cfg.adam)
    trace = []
    quiet = 0
    epoch = 0

    for epoch in range(1, cfg.R + 1):
        if projected:
            if exact:
                m = exact_gate_moments(GateParams(mu, tau))
                q, Q = m.q, m.Q
            else:
                Zm = clip_gates(mu, draw_noise(tau, cfg.M, D, moment_rng))
                q, Q = Zm.mean(axis=0), (Zm.T @ Zm) / cfg.M
            theta = solve_gated_system(XtX, Xty, q, Q, cfg.ridge_jitter)

        delta = draw_noise(tau, cfg.L, D, risk_rng)
        Z = clip_gates(mu, delta)
        G, data_risk = _data_terms(XtX, Xty, yy, N, theta, Z)
        V = data_risk + lam * float(np.sum(norm_cdf(mu / tau)))
        trace.append((epoch, V))

        new_mu = np.clip(mu_opt.step(mu, _mu_grad(G, theta, mu, delta, N, tau, lam)),
                         -MU_CAP, MU_CAP)
        if not projected:
            theta = theta_opt.step(theta, (2.0 / N) * np.mean(G * Z, axis=0))
        if not (np.all(np.isfinite(new_mu)) and np.all(np.isfinite(theta)) and np.isfinite(V)):
            raise DivergenceError(epoch)

        quiet = quiet + 1 if np.max(np.abs(new_mu - mu)) < cfg.early_stop_tol else 0
        mu = new_mu
        if callback is not None:
            callback(epoch, SolverState(theta=theta, mu=mu, risk_trace=trace))
        if quiet >= cfg.early_stop_patience:
            break

    beta_hat = theta * exact_gate_mean(mu, tau)
    return FitResult(beta_hat=beta_hat, support_hat=extract_support(beta_hat, K),
                     theta=theta, mu=mu, epochs_run=epoch, final_risk=trace[-1][1],
                     risk_trace=trace)


def fit_projected_stg(data, K, config=None, callback=None):
    """Projected-STG: closed-form theta each epoch, Adam descent on mu.

    Parameters
    ----------
    data : LinearDataset
    K : int
        Size of the returned support estimate.
    config : SolverConfig, optional
    callback : callable, optional
        Called as ``callback(epoch, SolverState)`` after every epoch.

    Returns
    -------
    FitResult
        ``beta_hat = theta * E[z(mu)]`` using the exact gate mean at the final
        ``mu``, and the top-K support of ``|beta_hat|``.
    """
    return _fit(data, K, config or SolverConfig(), projected=True, callback=callback)


def fit_plain_stg(data, K, config=None, callback=None):
    """Original STG: simultaneous Adam steps on theta (from zero) and mu."""
    return _fit(data, K, config or SolverConfig(), projected=False, callback=callback)
