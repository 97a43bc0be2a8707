"""GAS(1,1) score-driven filter with time-varying location and log-scale.

The observation density is r_t = mu_t + exp(lam_t) z_t with z_t a
standardized innovation; theta_t = (mu_t, lam_t) evolves as

    theta_{t+1} = kappa + A s_t + B theta_t,     s_t = S_t grad_t,

where grad_t is the score of the observation log-density in theta_t and
S_t is the identity (scaling_power 0) or an inverse power of the
conditional information matrix (1/2 or 1).  The shape parameter stays
fixed.  Log-scale rather than scale is filtered so positivity never needs
a constraint.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from . import innovations
from ._recursions import gas_filter_kernel, gas_simulate_kernel, gas_variance_filter

SCORE_CLIP = 50.0


def _as_density(innovation):
    if isinstance(innovation, innovations.StandardizedDensity):
        return innovation
    return innovations.StandardizedDensity(innovation)


@dataclass(frozen=True)
class GasParams:
    """Update-equation coefficients for (location, log-scale).

    `kappa`, `a`, `b` are pairs ordered (location, log-scale).  The
    unconditional targets are mu* = kappa[0]/(1-b[0]) and
    sigma* = exp(kappa[1]/(1-b[1])).
    """

    kappa: tuple
    a: tuple
    b: tuple
    innovation: object = "norm"
    scaling_power: float = 0.0
    score_clip: float = SCORE_CLIP

    def __post_init__(self):
        if not self.score_clip > 0.0:
            raise ValueError("score_clip must be > 0")
        object.__setattr__(self, "kappa", tuple(float(v) for v in self.kappa))
        object.__setattr__(self, "a", tuple(float(v) for v in self.a))
        object.__setattr__(self, "b", tuple(float(v) for v in self.b))
        object.__setattr__(self, "innovation", _as_density(self.innovation))
        if len(self.kappa) != 2 or len(self.a) != 2 or len(self.b) != 2:
            raise ValueError("kappa, a, b must each have length 2")
        if any(v < 0 for v in self.a):
            raise ValueError("a entries must be >= 0")
        if any(not 0.0 < v < 1.0 for v in self.b):
            raise ValueError("b entries must lie in (0, 1)")
        if self.scaling_power not in (0.0, 0.5, 1.0):
            raise ValueError("scaling_power must be 0, 0.5, or 1")

    @classmethod
    def from_targets(cls, mu_star, sigma_star, a, b, innovation="norm",
                     scaling_power=0.0):
        """Build from unconditional targets instead of intercepts."""
        if sigma_star <= 0:
            raise ValueError("sigma_star must be > 0")
        kappa = ((1.0 - b[0]) * mu_star, (1.0 - b[1]) * math.log(sigma_star))
        return cls(kappa, tuple(a), tuple(b), innovation, scaling_power)

    @property
    def mu_star(self):
        return self.kappa[0] / (1.0 - self.b[0])

    @property
    def sigma_star(self):
        return math.exp(self.kappa[1] / (1.0 - self.b[1]))

    @property
    def theta0(self):
        return np.array([self.mu_star, math.log(self.sigma_star)])


@dataclass(frozen=True)
class GasPath:
    """Filtered (location, log-scale) path and the scaled scores."""

    theta: np.ndarray
    score: np.ndarray

    @property
    def sigma(self):
        return np.exp(self.theta[:, 1])


def _kernel_args(p: GasParams):
    fam = p.innovation.spec.family
    if p.innovation.spec.skew != 1.0:
        return None
    if fam == "norm":
        return 0.0, False
    if fam == "std":
        return float(p.innovation.spec.shape[0]), True
    return None


def _scaled_score_generic(d, r, mu, lam, power, clip=SCORE_CLIP):
    sigma = math.exp(lam)
    z = (r - mu) / sigma
    g = np.array([
        float(np.asarray(innovations.score_wrt(d, np.array([z]), "location",
                                               mu=mu, lam=lam))[0]),
        float(np.asarray(innovations.score_wrt(d, np.array([z]), "log-scale",
                                               mu=mu, lam=lam))[0]),
    ])
    if power > 0.0:
        info = information_matrix(d, np.array([mu, lam]))
        g = g / np.diag(info) ** power
    return np.clip(g, -clip, clip)


def gas_filter(r, p: GasParams) -> GasPath:
    """Run the score-driven update over a return series."""
    x = r.values if hasattr(r, "values") else np.asarray(r, dtype=float)
    ka = _kernel_args(p)
    if ka is not None:
        nu, is_t = ka
        theta, s, flag = gas_filter_kernel(
            x, np.asarray(p.kappa), np.asarray(p.a), np.asarray(p.b),
            nu, is_t, p.scaling_power, p.theta0, p.score_clip)
        if flag:
            raise ArithmeticError(f"non-finite score at t={flag - 1}")
        return GasPath(theta=theta, score=s)
    d = p.innovation
    n = x.shape[0]
    theta = np.empty((n, 2))
    s = np.empty((n, 2))
    th = p.theta0.copy()
    for t in range(n):
        theta[t] = th
        st = _scaled_score_generic(d, x[t], th[0], th[1], p.scaling_power,
                                   p.score_clip)
        if not np.all(np.isfinite(st)):
            raise ArithmeticError(f"non-finite score at t={t}")
        s[t] = st
        th = np.asarray(p.kappa) + np.asarray(p.a) * st + np.asarray(p.b) * th
    return GasPath(theta=theta, score=s)


def information_matrix(p, theta) -> np.ndarray:
    """Conditional information E[grad grad'] for (location, log-scale) by
    quadrature over the observation density at theta."""
    d = p.innovation if isinstance(p, GasParams) else _as_density(p)
    mu, lam = float(theta[0]), float(theta[1])
    bound = d.support_bound()

    def g(z, which):
        return float(np.asarray(innovations.score_wrt(
            d, np.array([z]), which, mu=mu, lam=lam))[0])

    out = np.empty((2, 2))
    names = ("location", "log-scale")
    for i in range(2):
        for j in range(i, 2):
            def integrand(z, i=i, j=j):
                w = float(np.exp(d.log_pdf(np.array([z]))[0]))
                return g(z, names[i]) * g(z, names[j]) * w
            val, _ = integrate.quad(integrand, -bound, bound, limit=200)
            if not math.isfinite(val):
                raise ArithmeticError("information quadrature failed")
            out[i, j] = out[j, i] = val
    return out


def gas_simulate(p: GasParams, n: int, burn: int = 1000, seed=None) -> np.ndarray:
    """Draw r_t from the conditional density, then update; deterministic
    per seed, with `burn` initial points discarded."""
    z = p.innovation.sample(n + burn, seed=seed)
    ka = _kernel_args(p)
    if ka is not None:
        nu, is_t = ka
        r, _, flag = gas_simulate_kernel(
            z, np.asarray(p.kappa), np.asarray(p.a), np.asarray(p.b),
            nu, is_t, p.scaling_power, p.theta0, p.score_clip)
        if flag:
            raise ArithmeticError(f"explosive path at t={flag - 1}")
        return r[burn:]
    d = p.innovation
    th = p.theta0.copy()
    r = np.empty(n + burn)
    for t in range(n + burn):
        r[t] = th[0] + math.exp(th[1]) * z[t]
        st = _scaled_score_generic(d, r[t], th[0], th[1], p.scaling_power,
                                   p.score_clip)
        th = np.asarray(p.kappa) + np.asarray(p.a) * st + np.asarray(p.b) * th
        if abs(th[0]) > 1e6 or abs(th[1]) > 50.0:
            raise ArithmeticError(f"explosive path at t={t}")
    return r[burn:]


def scaled_score_is_md_check(p: GasParams, n_draws: int, seed=0) -> float:
    """|Monte Carlo mean| of the scaled score under the model's own
    conditional density at the unconditional targets; should sit within a
    few Monte Carlo standard errors of zero."""
    if n_draws < 1:
        raise ValueError("n_draws must be >= 1")
    d = p.innovation
    z = d.sample(n_draws, seed=seed)
    mu, lam = p.theta0
    r = mu + math.exp(lam) * z
    ka = _kernel_args(p)
    if ka is not None:
        nu, is_t = ka
        sigma = math.exp(lam)
        if is_t:
            s2 = nu / (nu - 2.0)
            x2 = s2 * z * z
            g_mu = (nu + 1.0) * s2 * z / (nu + x2) / sigma
            g_lam = (nu + 1.0) * x2 / (nu + x2) - 1.0
        else:
            g_mu = z / sigma
            g_lam = z * z - 1.0
        if p.scaling_power > 0.0:
            info = information_matrix(p, p.theta0)
            g_mu = g_mu / info[0, 0] ** p.scaling_power
            g_lam = g_lam / info[1, 1] ** p.scaling_power
        return float(max(abs(np.mean(g_mu)), abs(np.mean(g_lam))))
    means = np.zeros(2)
    for t in range(n_draws):
        means += _scaled_score_generic(d, r[t], mu, lam, p.scaling_power)
    means /= n_draws
    return float(np.max(np.abs(means)))


def filter_variance_link(r, mu, kappa, a, b):
    """Normal-score GAS in the variance coordinate with unit-information
    scaling: sigma2_{t+1} = kappa + a (eps^2_t - sigma2_t) + b sigma2_t,
    algebraically a GARCH(1,1) with omega=kappa, alpha=a, beta=b-a.
    Returns the sigma2 path."""
    x = r.values if hasattr(r, "values") else np.asarray(r, dtype=float)
    s20 = kappa / (1.0 - b) if b < 1.0 else np.var(x)
    s2, flag = gas_variance_filter(x, mu, kappa, a, b, s20)
    if flag:
        raise ArithmeticError(f"non-positive variance at t={flag - 1}")
    return s2


def update_equation(p: GasParams) -> str:
    """Render the fitted update recursion, one line per coordinate."""
    lines = []
    for i, name in enumerate(("location", "log-scale")):
        lines.append(
            f"{name}: theta[t+1] = {p.kappa[i]:.4f} + {p.a[i]:.4f} s[t]"
            f" + {p.b[i]:.4f} theta[t]"
        )
    return "\n".join(lines)
