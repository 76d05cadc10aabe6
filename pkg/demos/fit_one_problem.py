# Fit one synthetic problem with Projected-STG and look at what comes out.
import numpy as np

from projstg import DesignSpec, SolverConfig, fit_projected_stg, generate_dataset, generate_signal
from projstg.bench import lambda_base
from projstg.metrics import score_trial

rng = np.random.default_rng(7)
D, K, N, sigma = 64, 10, 80, 0.5
signal = generate_signal(D, K, rng)
data = generate_dataset(DesignSpec("GaussianIID", N, D), signal, sigma, rng)
print("true support:", signal.support)

lam = 1.0 * lambda_base(sigma, D, K, N)
trace = []
res = fit_projected_stg(data, K, SolverConfig(lam=lam, seed=1),
                        callback=lambda epoch, state: trace.append(state.mu.copy()))
print("epochs run:", res.epochs_run, " final risk:", round(res.final_risk, 4))
print("estimated: ", res.support_hat)

score = score_trial(res.support_hat, signal.support, res.beta_hat, signal.beta)
print(score)

# gates on true features drift up, the rest drift down
mu_path = np.array(trace)
on = list(signal.support)
off = [d for d in range(D) if d not in signal.support]
for epoch in (0, 10, 50, 200, len(trace) - 1):
    print(epoch + 1, round(mu_path[epoch, on].mean(), 3), round(mu_path[epoch, off].mean(), 3))

# coefficient estimates on the support
print(np.round(np.column_stack([signal.beta[on], res.beta_hat[on]]), 3))
