"""The flexible GARCH family: persistence, half-life, leverage, components.

Run:  python3 demos/02_garch_family.py
"""

import numpy as np

from vollab import cgarch, diagnostics, estimator, fgarch
from vollab.innovations import InnovationSpec

# -- plain GARCH(1,1) with heavy-tailed shocks --------------------------------
true = fgarch.FGarchParams(omega=0.0518, alpha=(0.1011, ), beta=(0.7988, ),
                           innovation=InnovationSpec("std", (4.1, )))
print(f"true persistence     {fgarch.persistence(true):.4f}")
print(f"half-life            {fgarch.half_life(fgarch.persistence(true)):.1f} days")
print(f"unconditional var    {fgarch.unconditional_variance(true):.4f}")

r = fgarch.simulate(true, 4000, burn=2000, seed=7)
fit = estimator.fit(estimator.ModelSpec("garch", "std"), r, n_starts=1)
print("\nfitted on 4000 simulated returns:")
for name in ("omega", "alpha", "beta", "nu"):
    print(f"  {name:6s} {fit.params[name]: .4f}  (robust se {fit.se_robust[name]:.4f})")
print(f"  alpha+beta = {fit.estimand('alpha+beta'):.4f}")

z = r / fit.path.sigma
print(f"ARCH-LM(5) raw p        = {diagnostics.arch_lm(r, 5).p_value:.2e}")
print(f"ARCH-LM(5) residual p   = {diagnostics.arch_lm(z, 5).p_value:.4f}")

# -- threshold GARCH: asymmetric news impact ----------------------------------
t = fgarch.TGarchParams(omega=0.03, alpha=0.05, beta=0.88, gamma_lev=0.10,
                        innovation="norm")
grid = np.array([-2.0, -1.0, 1.0, 2.0])
nic = fgarch.news_impact(t, grid)
print("\nTGARCH news impact (negative shocks hit harder):")
for e, v in zip(grid, nic):
    print(f"  eps={e:+.1f} -> sigma^2 contribution {v:.4f}")

# -- component GARCH: permanent vs transitory ---------------------------------
c = cgarch.CGarchParams(omega=1.0, rho=0.995, phi=0.05, alpha=0.06,
                        beta=0.88, innovation="norm")
rho_perm, rho_trans = cgarch.component_persistence(c)
print(f"\nCGARCH persistence: permanent {rho_perm:.3f}, transitory {rho_trans:.3f}")
rc = cgarch.simulate(c, 1000, burn=1000, seed=3)
path = cgarch.filter_components(rc, c)
print(f"mean permanent component  {np.mean(path.m):.3f}")
print(f"mean transitory component {np.mean(path.q):.3f} (averages near zero)")
