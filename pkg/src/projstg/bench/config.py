"""Experiment configuration and its JSON form.

Schema (all keys optional except where noted)::

    {
      "sweep": "VaryN" | "VaryK",                 # required
      "grid": [10, 20, ...],                      # strictly increasing ints
      "fixed": {"D": 64, "K": 10, "N": 40, "sigma": 0.5,
                "ensemble": "GaussianIID", "rho": 0.0},
      "trials": 100,
      "methods": ["ProjSTG", "PlainSTG", "LASSO", "OMP", "RandOMP", "SCAD"],
      "lambda_rule": {"base": "wainwright", "C_grid": [...], "cv_folds": 5,
                      "cv_scope": "per_point" | "once", "C": null, "k_floor": 2},
      "master_seed": 0,
      "solver": {... SolverConfig fields ...},
      "baselines": {"lasso": {...}, "scad": {...}, "rand_omp": {...}},
      "bootstrap": {"B": 1000, "level": 0.9},
      "max_failure_rate": 0.1
    }

``fixed.K`` is used by VaryN sweeps and ``fixed.N`` by VaryK sweeps.
"""

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..baselines import LassoConfig, RandOmpConfig, ScadConfig
from ..exceptions import ConfigError
from ..linmodel import Ensemble
from ..solver import AdamConfig, SolverConfig

METHODS = ("ProjSTG", "PlainSTG", "LASSO", "OMP", "RandOMP", "SCAD")
STG_METHODS = ("ProjSTG", "PlainSTG")
DEFAULT_N_GRID = tuple(range(10, 101, 10))
DEFAULT_K_GRID = (1, 5, 10, 15, 20, 25)
DEFAULT_C_GRID = tuple(float(c) for c in np.logspace(-1, 1, 10))


@dataclass(frozen=True)
class LambdaRule:
    base: str = "wainwright"
    C_grid: tuple = DEFAULT_C_GRID
    cv_folds: int = 5
    cv_scope: str = "per_point"
    C: float = None
    k_floor: int = 2


@dataclass(frozen=True)
class ExperimentConfig:
    sweep: str
    grid: tuple = None
    D: int = 64
    K: int = 10
    N: int = 40
    sigma: float = 0.5
    ensemble: str = "GaussianIID"
    rho: float = 0.0
    trials: int = 100
    methods: tuple = ("ProjSTG",)
    lambda_rule: LambdaRule = field(default_factory=LambdaRule)
    master_seed: int = 0
    solver: SolverConfig = field(default_factory=SolverConfig)
    lasso: LassoConfig = field(default_factory=LassoConfig)
    scad: ScadConfig = field(default_factory=ScadConfig)
    rand_omp: RandOmpConfig = field(default_factory=RandOmpConfig)
    bootstrap_B: int = 1000
    bootstrap_level: float = 0.9
    max_failure_rate: float = 0.1

    def __post_init__(self):
        if self.grid is None:
            default = DEFAULT_N_GRID if self.sweep == "VaryN" else DEFAULT_K_GRID
            object.__setattr__(self, "grid", default)
        object.__setattr__(self, "grid", tuple(int(g) if float(g).is_integer() else g
                                               for g in self.grid))
        object.__setattr__(self, "methods", tuple(self.methods))
        validate(self)

    def point(self, x):
        """``(N, K)`` at grid value ``x``."""
        return (int(x), self.K) if self.sweep == "VaryN" else (self.N, int(x))

    @property
    def x_label(self):
        return "N" if self.sweep == "VaryN" else "K"

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)


def validate(cfg):
    if cfg.sweep not in ("VaryN", "VaryK"):
        raise ConfigError(f"sweep must be VaryN or VaryK, got {cfg.sweep!r}")
    grid = list(cfg.grid)
    if not grid:
        raise ConfigError("grid is empty")
    if any(int(g) != g or g < 1 for g in grid):
        raise ConfigError(f"grid values must be positive integers: {grid}")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ConfigError(f"grid must be strictly increasing: {grid}")
    if cfg.trials < 1:
        raise ConfigError("trials must be >= 1")
    unknown = [m for m in cfg.methods if m not in METHODS]
    if unknown or not cfg.methods:
        raise ConfigError(f"unknown or empty methods {unknown}; choose from {METHODS}")
    if len(set(cfg.methods)) != len(cfg.methods):
        raise ConfigError("methods contain duplicates")
    try:
        Ensemble(cfg.ensemble)
    except ValueError:
        raise ConfigError(f"unknown ensemble {cfg.ensemble!r}") from None
    if not 0 <= cfg.rho < 1:
        raise ConfigError("rho must lie in [0, 1)")
    if cfg.sigma < 0:
        raise ConfigError("sigma must be >= 0")
    rule = cfg.lambda_rule
    if rule.base != "wainwright":
        raise ConfigError(f"unsupported lambda base {rule.base!r}")
    if not rule.C_grid or any(not 0.1 <= c <= 10 for c in rule.C_grid):
        raise ConfigError(f"C_grid must be a nonempty subset of [0.1, 10]: {rule.C_grid}")
    if rule.cv_folds < 2:
        raise ConfigError("cv_folds must be >= 2")
    if rule.cv_scope not in ("per_point", "once"):
        raise ConfigError("cv_scope must be per_point or once")
    if rule.C is not None and not rule.C > 0:
        raise ConfigError("fixed C must be positive")
    for x in grid:
        N, K = cfg.point(x)
        if K > cfg.D:
            raise ConfigError(f"K={K} exceeds D={cfg.D}")
        if cfg.D - max(K, rule.k_floor) <= 1:
            raise ConfigError(f"lambda base undefined for D={cfg.D}, K={K}")
    if not 0 < cfg.bootstrap_level < 1 or cfg.bootstrap_B < 1:
        raise ConfigError("bad bootstrap settings")


def _sub(cls, values, where):
    if values is None:
        return cls()
    if not isinstance(values, dict):
        raise ConfigError(f"{where} must be an object")
    names = {f.name for f in dataclasses.fields(cls)}
    extra = set(values) - names
    if extra:
        raise ConfigError(f"unknown keys in {where}: {sorted(extra)}")
    try:
        return cls(**values)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def from_dict(raw):
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    known = {"sweep", "grid", "fixed", "trials", "methods", "lambda_rule", "master_seed",
             "solver", "baselines", "bootstrap", "max_failure_rate"}
    extra = set(raw) - known
    if extra:
        raise ConfigError(f"unknown top-level keys: {sorted(extra)}")
    if "sweep" not in raw:
        raise ConfigError("config needs a 'sweep' key")

    kw = {"sweep": raw["sweep"]}
    if "grid" in raw:
        kw["grid"] = tuple(raw["grid"])
    fixed = raw.get("fixed", {})
    extra = set(fixed) - {"D", "K", "N", "sigma", "ensemble", "rho"}
    if extra:
        raise ConfigError(f"unknown keys in fixed: {sorted(extra)}")
    kw.update(fixed)
    for key in ("trials", "master_seed", "max_failure_rate"):
        if key in raw:
            kw[key] = raw[key]
    if "methods" in raw:
        kw["methods"] = tuple(raw["methods"])

    rule = dict(raw.get("lambda_rule", {}))
    if "C_grid" in rule:
        rule["C_grid"] = tuple(float(c) for c in rule["C_grid"])
    kw["lambda_rule"] = _sub(LambdaRule, rule, "lambda_rule")

    solver = dict(raw.get("solver", {}))
    if "adam" in solver:
        solver["adam"] = _sub(AdamConfig, solver["adam"], "solver.adam")
    kw["solver"] = _sub(SolverConfig, solver, "solver")

    base = raw.get("baselines", {})
    extra = set(base) - {"lasso", "scad", "rand_omp"}
    if extra:
        raise ConfigError(f"unknown keys in baselines: {sorted(extra)}")
    kw["lasso"] = _sub(LassoConfig, base.get("lasso"), "baselines.lasso")
    kw["scad"] = _sub(ScadConfig, base.get("scad"), "baselines.scad")
    kw["rand_omp"] = _sub(RandOmpConfig, base.get("rand_omp"), "baselines.rand_omp")

    boot = raw.get("bootstrap", {})
    extra = set(boot) - {"B", "level"}
    if extra:
        raise ConfigError(f"unknown keys in bootstrap: {sorted(extra)}")
    if "B" in boot:
        kw["bootstrap_B"] = boot["B"]
    if "level" in boot:
        kw["bootstrap_level"] = boot["level"]
    try:
        return ExperimentConfig(**kw)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path):
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
    return from_dict(raw)
