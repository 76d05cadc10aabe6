"""Synthetic sparse linear models and CSV dataset loading."""

import csv
import enum
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.linalg import cholesky, toeplitz, LinAlgError

from .exceptions import (DatasetLoadError, IllConditionedCovarianceError,
                         InvalidArgumentError)


class Ensemble(str, enum.Enum):
    GaussianIID = "GaussianIID"
    RademacherIID = "RademacherIID"
    ToeplitzGaussian = "ToeplitzGaussian"


@dataclass(frozen=True)
class DesignSpec:
    ensemble: Ensemble
    N: int
    D: int
    rho: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "ensemble", Ensemble(self.ensemble))
        if self.N < 1 or self.D < 1:
            raise InvalidArgumentError(f"N and D must be >= 1, got N={self.N}, D={self.D}")
        if not 0.0 <= self.rho < 1.0:
            raise InvalidArgumentError(f"rho must lie in [0, 1), got {self.rho}")


@dataclass(frozen=True)
class SparseSignal:
    beta: np.ndarray
    support: tuple

    @property
    def K(self):
        return len(self.support)

    @property
    def D(self):
        return self.beta.shape[0]


@dataclass
class LinearDataset:
    X: np.ndarray
    y: np.ndarray
    sigma: float
    truth: SparseSignal = None
    columns: list = field(default=None, repr=False)

    def __post_init__(self):
        if self.X.ndim != 2 or self.y.shape != (self.X.shape[0],):
            raise InvalidArgumentError(
                f"y has shape {self.y.shape}, expected ({self.X.shape[0]},)")

    @property
    def N(self):
        return self.X.shape[0]

    @property
    def D(self):
        return self.X.shape[1]


def toeplitz_covariance(D, rho):
    return toeplitz(rho ** np.arange(D))


def generate_design(spec, rng):
    """Draw an ``N x D`` design from one of the supported ensembles."""
    N, D = spec.N, spec.D
    if spec.ensemble is Ensemble.GaussianIID:
        return rng.standard_normal((N, D))
    if spec.ensemble is Ensemble.RademacherIID:
        return 2.0 * rng.integers(0, 2, size=(N, D)).astype(float) - 1.0
    try:
        U = cholesky(toeplitz_covariance(D, spec.rho), lower=False)
    except LinAlgError as exc:
        raise IllConditionedCovarianceError(
            f"Toeplitz covariance with rho={spec.rho} is not positive definite") from exc
    return rng.standard_normal((N, D)) @ U


def make_signal(beta):
    beta = np.asarray(beta, dtype=float)
    return SparseSignal(beta=beta, support=tuple(int(i) for i in np.flatnonzero(beta)))


def generate_signal(D, K, rng):
    """K-sparse signal with uniformly placed support and random +-1 entries."""
    if not 1 <= K <= D:
        raise InvalidArgumentError(f"need 1 <= K <= D, got K={K}, D={D}")
    support = np.sort(rng.choice(D, size=K, replace=False))
    beta = np.zeros(D)
    beta[support] = rng.choice([-1.0, 1.0], size=K)
    return SparseSignal(beta=beta, support=tuple(int(i) for i in support))


def _synthesize(X, signal, sigma, rng):
    if sigma < 0:
        raise InvalidArgumentError(f"sigma must be >= 0, got {sigma}")
    if X.shape[1] != signal.D:
        raise InvalidArgumentError(
            f"design has {X.shape[1]} columns but signal has length {signal.D}")
    noise = rng.standard_normal(X.shape[0])
    y = X @ signal.beta + sigma * noise
    return LinearDataset(X=X, y=y, sigma=float(sigma), truth=signal)


def generate_dataset(spec, signal, sigma, rng):
    """``y = X beta* + sigma * g`` with a fresh design from ``spec``."""
    if spec.D != signal.D:
        raise InvalidArgumentError(f"spec.D={spec.D} but signal has length {signal.D}")
    X = generate_design(spec, rng)
    return _synthesize(X, signal, sigma, rng)


def semi_synthetic(X, K, sigma, rng):
    """Plant a random K-sparse signal on a fixed (e.g. real) design."""
    X = np.asarray(X, dtype=float)
    if K > X.shape[1]:
        raise InvalidArgumentError(f"K={K} exceeds column count {X.shape[1]}")
    signal = generate_signal(X.shape[1], K, rng)
    return _synthesize(X, signal, sigma, rng)


def standardize_columns(X, names=None):
    """Center columns and scale to unit sample std (N-1 denominator)."""
    X = np.asarray(X, dtype=float)
    sd = X.std(axis=0, ddof=1)
    bad = np.flatnonzero(~(sd > 0))
    if bad.size:
        j = int(bad[0])
        label = names[j] if names else j
        raise DatasetLoadError(f"column {label!r} is constant; cannot standardize")
    return (X - X.mean(axis=0)) / sd


def _parse_float(cell, row, col):
    try:
        return float(cell)
    except ValueError:
        raise DatasetLoadError(
            f"non-numeric cell {cell!r} at row {row}, column {col}") from None


def load_csv_dataset(path, response_column, standardize=False):
    """Load a numeric CSV into a :class:`LinearDataset` with no ground truth.

    ``response_column`` is a header name or a 0-based column index. A first row
    that does not parse as numbers is treated as the header.
    """
    path = Path(path)
    if not path.is_file():
        raise DatasetLoadError(f"no such file: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if not rows:
        raise DatasetLoadError(f"{path} is empty")

    header = None
    try:
        [float(c) for c in rows[0]]
    except ValueError:
        header = [c.strip() for c in rows[0]]
        rows = rows[1:]
    width = len(header) if header else len(rows[0])

    if isinstance(response_column, str) and not response_column.lstrip("-").isdigit():
        if header is None or response_column not in header:
            raise DatasetLoadError(f"response column {response_column!r} not found in {path}")
        target = header.index(response_column)
    else:
        target = int(response_column)
        if target < 0:
            target += width
        if not 0 <= target < width:
            raise DatasetLoadError(f"response column index {target} out of range (width {width})")

    line0 = 2 if header else 1
    data = np.empty((len(rows), width))
    for i, row in enumerate(rows):
        if len(row) != width:
            raise DatasetLoadError(
                f"row {i + line0} has {len(row)} fields, expected {width}")
        for j, cell in enumerate(row):
            data[i, j] = _parse_float(cell.strip(), i + line0, header[j] if header else j)

    keep = [j for j in range(width) if j != target]
    names = [header[j] for j in keep] if header else [str(j) for j in keep]
    X = data[:, keep]
    if standardize:
        X = standardize_columns(X, names)
    return LinearDataset(X=X, y=data[:, target], sigma=float("nan"), truth=None,
                         columns=names)
