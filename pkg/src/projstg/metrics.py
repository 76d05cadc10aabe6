"""Support-recovery scoring and bootstrap bands."""

from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidArgumentError


@dataclass(frozen=True)
class TrialRecord:
    method: str
    sweep_x: float
    N: int
    D: int
    K: int
    sigma: float
    seed: int
    recovered: bool
    tpr: float
    fdr: float
    l2_error: float
    error: str = ""


@dataclass(frozen=True)
class CurvePoint:
    method: str
    x: float
    success_rate: float
    ci_low: float
    ci_high: float
    trials: int


@dataclass(frozen=True)
class TrialScore:
    recovered: bool
    tpr: float
    fdr: float
    l2_error: float
    tp: int
    fp: int
    fn: int


def score_trial(estimated, truth, beta_hat=None, beta_star=None):
    """Compare an estimated support with the true one.

    FDR is 0 when nothing is selected. TPR needs a nonempty true support.
    ``l2_error`` is NaN unless both coefficient vectors are given.
    """
    est, true = set(int(i) for i in estimated), set(int(i) for i in truth)
    if not true:
        raise InvalidArgumentError("true support is empty; TPR is undefined")
    tp = len(est & true)
    fp = len(est - true)
    fn = len(true - est)
    tpr = tp / (tp + fn)
    fdr = fp / (fp + tp) if tp + fp else 0.0
    if beta_hat is not None and beta_star is not None:
        l2 = float(np.linalg.norm(np.asarray(beta_hat, float) - np.asarray(beta_star, float)))
    else:
        l2 = float("nan")
    return TrialScore(recovered=est == true, tpr=tpr, fdr=fdr, l2_error=l2, tp=tp, fp=fp, fn=fn)


def bootstrap_band(outcomes, level=0.9, B=1000, rng=None):
    """Success rate with a percentile-bootstrap band.

    Returns ``(rate, low, high)``; the band spans the ``(1-level)/2`` and
    ``1-(1-level)/2`` quantiles of ``B`` resampled means.
    """
    x = np.asarray(outcomes, dtype=float)
    if x.size == 0:
        raise InvalidArgumentError("outcomes must be nonempty")
    if not 0 < level < 1 or B < 1:
        raise InvalidArgumentError(f"need 0 < level < 1 and B >= 1, got {level}, {B}")
    rng = np.random.default_rng() if rng is None else rng
    rate = float(x.mean())
    idx = rng.integers(0, x.size, size=(B, x.size))
    means = x[idx].mean(axis=1)
    alpha = (1.0 - level) / 2.0
    low, high = np.quantile(means, [alpha, 1.0 - alpha])
    # The band must contain the point estimate even for skewed resamples.
    return rate, float(min(low, rate)), float(max(high, rate))
