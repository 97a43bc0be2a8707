"""Score-driven (GAS) location/log-scale filter and its GARCH correspondence.

Run:  python3 demos/03_score_driven.py
"""

import numpy as np

from vollab import estimator, fgarch, gas
from vollab.innovations import InnovationSpec

# a GAS process with slowly moving location and persistent log-scale
p = gas.GasParams.from_targets(mu_star=0.05, sigma_star=1.2,
                               a=(0.02, 0.10), b=(0.95, 0.97),
                               innovation=InnovationSpec("std", (5.0, )))
print("update equation (log-scale):", gas.update_equation(p))

r = gas.gas_simulate(p, 6000, burn=1000, seed=5)
path = gas.gas_filter(r, p)
print(f"filtered sigma: mean {np.mean(path.sigma):.3f}, "
      f"sd {np.std(path.sigma):.3f}")
print(f"scaled score mean {np.mean(path.score):.4f} "
      "(martingale difference, so near zero)")

fit = estimator.fit(estimator.ModelSpec("gas", "std"), r, n_starts=1)
print("\nrefit on the simulated path:")
for name in ("a_sigma", "b_sigma", "nu"):
    print(f"  {name:8s} {fit.params[name]: .4f}")

# with Normal innovations and a log link, b_sigma plays the same role as
# the GARCH persistence alpha + beta
pg = fgarch.FGarchParams(omega=0.05, alpha=(0.08, ), beta=(0.89, ),
                         innovation="norm")
rg = fgarch.simulate(pg, 10_000, burn=2000, seed=4)
g = estimator.fit(estimator.ModelSpec("garch", "norm"), rg,
                  n_starts=1, compute_se=False)
s = estimator.fit(estimator.ModelSpec("gas", "norm"), rg,
                  n_starts=1, compute_se=False)
print(f"\nGARCH alpha+beta = {g.estimand('alpha+beta'):.4f}")
print(f"GAS    b_sigma   = {s.params['b_sigma']:.4f}")
