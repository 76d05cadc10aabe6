"""Exception types raised across the package."""

import numpy as np


class InvalidArgumentError(ValueError):
    pass


class SingularSystemError(np.linalg.LinAlgError):
    """The gated normal equations could not be factorized, even with jitter."""


class DivergenceError(FloatingPointError):
    def __init__(self, epoch, message=None):
        self.epoch = epoch
        super().__init__(message or f"non-finite solver state at epoch {epoch}")


class IllConditionedCovarianceError(np.linalg.LinAlgError):
    pass


class DatasetLoadError(ValueError):
    pass


class InstanceTooLargeError(ValueError):
    pass


class ConfigError(ValueError):
    pass


class SweepHealthError(RuntimeError):
    pass
