# A small phase-transition sweep: success probability against sample size.
# The full-size version is `projstg sweep --config <file>`; this one takes a minute.
import numpy as np

from projstg.bench import ExperimentConfig, LambdaRule, emit_plot, run_experiment, success_by_method
from projstg.solver import SolverConfig

cfg = ExperimentConfig(
    sweep="VaryN", grid=(10, 20, 30, 40, 60), D=32, K=5, sigma=0.5, trials=20,
    methods=("ProjSTG", "LASSO", "OMP"),
    lambda_rule=LambdaRule(C_grid=(0.3, 1.0, 3.0)),
    solver=SolverConfig(R=300),
)
records, curves = run_experiment(cfg, workers=2)

rates = success_by_method(curves)
print("N     " + "".join(f"{m:>9s}" for m in rates))
for x in cfg.grid:
    print(f"{x:<6d}" + "".join(f"{rates[m][x]:9.2f}" for m in rates))

tpr = {m: float(np.mean([r.tpr for r in records if r.method == m])) for m in cfg.methods}
print("mean TPR:", {m: round(v, 3) for m, v in tpr.items()})

emit_plot(curves, "phase_transition.svg", title="D=32, K=5, sigma=0.5")
