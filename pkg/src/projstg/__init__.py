"""Sparse support recovery with projected stochastic gates."""

from .exceptions import (ConfigError, DatasetLoadError, DivergenceError,
                         IllConditionedCovarianceError, InstanceTooLargeError,
                         InvalidArgumentError, SingularSystemError, SweepHealthError)
from .gates import (GateMoments, GateParams, exact_gate_moments, gate_penalty,
                    mc_gate_moments, sample_gate)
from .linmodel import (DesignSpec, Ensemble, LinearDataset, SparseSignal, generate_dataset,
                       generate_design, generate_signal, load_csv_dataset, semi_synthetic)
from .solver import (AdamConfig, FitResult, MomentMode, SolverConfig, extract_support,
                     fit_plain_stg, fit_projected_stg, mc_risk, mu_gradient, projected_theta)
from .baselines import (exhaustive_best_subset, lasso_fit, omp_fit, rand_omp_fit, scad_fit)
from .metrics import CurvePoint, TrialRecord, bootstrap_band, score_trial

__version__ = "0.1.0"
