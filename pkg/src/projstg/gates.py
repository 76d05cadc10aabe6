"""Gaussian stochastic gates.

A gate is ``z_d = clip(mu_d + delta_d, 0, 1)`` with ``delta_d ~ N(0, tau^2)``.
This module samples gates, evaluates the expected-open-gates penalty and
estimates the first and second gate moments, either by Monte Carlo or in
closed form.

Noise for a block of gate draws is always taken from the caller's generator
as one ``(n_samples, D)`` array in row-major order, so entry ``(l, d)`` is a
fixed function of the stream state.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfc

from .exceptions import InvalidArgumentError

_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def norm_cdf(x):
    """Standard normal CDF written through erfc, accurate in both tails."""
    return 0.5 * erfc(-np.asarray(x, dtype=float) / _SQRT2)


def norm_pdf(x):
    x = np.asarray(x, dtype=float)
    return _INV_SQRT_2PI * np.exp(-0.5 * x * x)


@dataclass(frozen=True)
class GateParams:
    mu: np.ndarray
    tau: float

    def __post_init__(self):
        mu = np.atleast_1d(np.asarray(self.mu, dtype=float))
        if mu.ndim != 1:
            raise InvalidArgumentError("mu must be a vector")
        if not np.all(np.isfinite(mu)):
            raise InvalidArgumentError("mu has non-finite entries")
        if not self.tau > 0:
            raise InvalidArgumentError(f"tau must be positive, got {self.tau}")
        object.__setattr__(self, "mu", mu)

    @property
    def dim(self):
        return self.mu.shape[0]


@dataclass(frozen=True)
class GateMoments:
    """Estimates of ``q = E[z]`` and ``Q = E[z z^T]``.

    ``sample_count`` is the number of Monte Carlo draws, or 0 for the exact
    closed-form moments.
    """

    q: np.ndarray
    Q: np.ndarray
    sample_count: int

    @property
    def exact(self):
        return self.sample_count == 0


def _check_tau(tau):
    if not tau > 0:
        raise InvalidArgumentError(f"tau must be positive, got {tau}")


def clip_gates(mu, delta):
    """Gate values for given noise draws; broadcasts ``mu`` over rows of ``delta``."""
    return np.clip(mu + delta, 0.0, 1.0)


def sample_gate(mu_d, tau, rng):
    """Draw a single gate value for one coordinate."""
    _check_tau(tau)
    if math.isnan(mu_d):
        raise InvalidArgumentError("mu_d is NaN")
    delta = tau * rng.standard_normal()
    return min(1.0, max(0.0, mu_d + delta))


def draw_noise(tau, n_samples, dim, rng):
    return tau * rng.standard_normal((n_samples, dim))


def sample_gates(mu, tau, n_samples, rng):
    """Return ``(Z, delta)``, both of shape ``(n_samples, D)``."""
    _check_tau(tau)
    mu = np.asarray(mu, dtype=float)
    delta = draw_noise(tau, n_samples, mu.shape[0], rng)
    return clip_gates(mu, delta), delta


def gate_penalty(mu, tau):
    """Expected number of open gates, ``sum_d Phi(mu_d / tau)``."""
    _check_tau(tau)
    return float(np.sum(norm_cdf(np.asarray(mu, dtype=float) / tau)))


def gate_penalty_grad(mu, tau):
    _check_tau(tau)
    return norm_pdf(np.asarray(mu, dtype=float) / tau) / tau


def exact_gate_mean(mu, tau):
    """Closed-form ``E[z]`` for each coordinate."""
    return _clipped_gaussian_moments(np.asarray(mu, dtype=float), tau)[0]


def _clipped_gaussian_moments(mu, tau):
    a = -mu / tau
    b = (1.0 - mu) / tau
    Pa, Pb = norm_cdf(a), norm_cdf(b)
    pa, pb = norm_pdf(a), norm_pdf(b)
    mass = Pb - Pa
    upper = norm_cdf(-b)  # P(mu + delta > 1)
    first = mu * mass + tau * (pa - pb) + upper
    # int_a^b t^2 phi(t) dt = (Pb - Pa) + a*pa - b*pb
    second = (mu * mu * mass
              + 2.0 * mu * tau * (pa - pb)
              + tau * tau * (mass + a * pa - b * pb)
              + upper)
    return np.clip(first, 0.0, 1.0), np.clip(second, 0.0, 1.0)


def exact_gate_moments(params):
    """Exact moments of independent clipped-Gaussian gates.

    With ``a = -mu/tau`` and ``b = (1-mu)/tau``::

        E[z]   = mu (Phi(b) - Phi(a)) + tau (phi(a) - phi(b)) + 1 - Phi(b)
        E[z^2] = mu^2 (Phi(b) - Phi(a)) + 2 mu tau (phi(a) - phi(b))
                 + tau^2 (Phi(b) - Phi(a) + a phi(a) - b phi(b)) + 1 - Phi(b)

    Off-diagonal second moments are ``q_i q_j`` by independence.
    """
    q, second = _clipped_gaussian_moments(params.mu, params.tau)
    # Jensen: E[z^2] >= E[z]^2; guard the rounding at degenerate gates.
    second = np.maximum(second, q * q)
    Q = np.outer(q, q)
    np.fill_diagonal(Q, second)
    return GateMoments(q=q, Q=Q, sample_count=0)


def moments_from_samples(Z):
    Z = np.asarray(Z, dtype=float)
    M = Z.shape[0]
    return GateMoments(q=Z.mean(axis=0), Q=(Z.T @ Z) / M, sample_count=M)


def mc_gate_moments(params, M, rng):
    """Monte Carlo moments from ``M`` i.i.d. gate vectors."""
    if M < 1:
        raise InvalidArgumentError(f"M must be >= 1, got {M}")
    Z, _ = sample_gates(params.mu, params.tau, M, rng)
    return moments_from_samples(Z)
