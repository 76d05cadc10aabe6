# The classical comparators on a single noisy instance.
import numpy as np

from projstg import (DesignSpec, exhaustive_best_subset, extract_support, generate_dataset,
                     generate_signal, lasso_fit, omp_fit, rand_omp_fit, scad_fit)
from projstg.baselines import refit_residual
from projstg.bench import lambda_base

rng = np.random.default_rng(3)
D, K, N, sigma = 14, 3, 40, 0.5
signal = generate_signal(D, K, rng)
data = generate_dataset(DesignSpec("ToeplitzGaussian", N, D, rho=0.5), signal, sigma, rng)
X, y = data.X, data.y
lam = lambda_base(sigma, D, K, N)

fits = {
    "LASSO": extract_support(lasso_fit(X, y, lam), K),
    "SCAD": extract_support(scad_fit(X, y, lam), K),
    "OMP": omp_fit(X, y, K)[1],
    "RandOMP": rand_omp_fit(X, y, K, rng=np.random.default_rng(0))[1],
    "best subset": exhaustive_best_subset(X, y, K),
}
print("truth      ", signal.support)
for name, support in fits.items():
    print(f"{name:11s}", support, round(refit_residual(X, y, support), 4))

# LASSO path: how many coefficients survive as the penalty grows
for scale in (0.1, 0.3, 1, 3):
    beta = lasso_fit(X, y, scale * lam)
    print(scale, np.count_nonzero(beta))
