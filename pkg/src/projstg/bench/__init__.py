"""Benchmark harness: configs, seeded sweeps, CSV/SVG output and the CLI."""

from .config import ExperimentConfig, LambdaRule, from_dict, load_config
from .experiment import (child_seed, cv_errors, isotonic_deviation, lambda_base,
                         run_experiment, select_C, success_by_method)
from .output import emit_csv, emit_curves_csv, emit_plot, emit_records_csv, read_curves_csv, read_records_csv
