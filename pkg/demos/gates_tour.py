# A short walk through stochastic gates: samples, moments, penalty.
import numpy as np

from projstg.gates import (GateParams, exact_gate_moments, gate_penalty, mc_gate_moments,
                           sample_gates)

rng = np.random.default_rng(0)
mu = np.array([-0.8, 0.0, 0.5, 1.0, 1.7])
tau = 0.5

# each row is one draw of the five gates; values are clipped into [0, 1]
Z, delta = sample_gates(mu, tau, 6, rng)
print(np.round(Z, 3))

# fraction of exact zeros and ones per gate over many draws
Z, _ = sample_gates(mu, tau, 20000, rng)
print("P(z=0):", np.round((Z == 0).mean(axis=0), 3))
print("P(z=1):", np.round((Z == 1).mean(axis=0), 3))

# closed-form moments vs a Monte Carlo estimate
params = GateParams(mu, tau)
exact = exact_gate_moments(params)
mc = mc_gate_moments(params, 200000, rng)
print("E[z]   exact", np.round(exact.q, 4))
print("E[z]   MC   ", np.round(mc.q, 4))
print("E[z^2] exact", np.round(np.diag(exact.Q), 4))
print("E[z^2] MC   ", np.round(np.diag(mc.Q), 4))

# off-diagonal second moments factor because gates are independent
gap = exact.Q - np.outer(exact.q, exact.q)
print("variances:", np.round(np.diag(gap), 4))

# expected number of open gates, the quantity the penalty counts
for m in (-2.0, 0.0, 0.5, 2.0):
    print(m, round(gate_penalty(np.full(5, m), tau), 4))
