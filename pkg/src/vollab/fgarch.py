"""Omnibus fGARCH(p,q) family: filtering, persistence, and simulation.

The conditional standard deviation follows a Box-Cox style recursion in
sigma^gamma with per-lag rotation (zeta1) and shift (zeta2) of the
standardized shock:

    sigma^gamma_t = omega
        + sum_j alpha_j sigma^gamma_{t-j} (|z_{t-j} - zeta2_j|
                                           - zeta1_j (z_{t-j} - zeta2_j))^gamma
        + sum_j beta_j sigma^gamma_{t-j}

with the power delta tied to gamma.  Persistence is
P = sum beta_j + sum alpha_j rho_j where rho_j is the expectation of the
shock term under the standardized innovation density, computed by adaptive
quadrature.  The GJR-style threshold model (TGARCH) is provided both as a
dedicated squared-variance recursion and as an fGARCH configuration.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from . import innovations
from ._recursions import fgarch_filter, fgarch_simulate_path, tgarch_filter


def _as_density(innovation):
    if isinstance(innovation, innovations.StandardizedDensity):
        return innovation
    return innovations.StandardizedDensity(innovation)


@dataclass(frozen=True)
class FGarchParams:
    """Parameter vector of the family recursion.

    `alpha`, `zeta1`, `zeta2` share length p; `beta` has length q.
    `innovation` may be a family token, an InnovationSpec, or a built
    StandardizedDensity.
    """

    omega: float
    alpha: tuple
    beta: tuple
    gamma: float = 2.0
    zeta1: tuple = None
    zeta2: tuple = None
    innovation: object = "norm"

    def __post_init__(self):
        alpha = tuple(float(a) for a in np.atleast_1d(self.alpha))
        beta = tuple(float(b) for b in np.atleast_1d(self.beta))
        z1 = self.zeta1 if self.zeta1 is not None else (0.0,) * len(alpha)
        z2 = self.zeta2 if self.zeta2 is not None else (0.0,) * len(alpha)
        z1 = tuple(float(v) for v in np.atleast_1d(z1))
        z2 = tuple(float(v) for v in np.atleast_1d(z2))
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "zeta1", z1)
        object.__setattr__(self, "zeta2", z2)
        object.__setattr__(self, "innovation", _as_density(self.innovation))
        if not self.omega > 0:
            raise ValueError("omega must be > 0")
        if any(a < 0 for a in alpha) or any(b < 0 for b in beta):
            raise ValueError("alpha and beta must be >= 0")
        if not self.gamma > 0:
            raise ValueError("gamma must be > 0")
        if len(z1) != len(alpha) or len(z2) != len(alpha):
            raise ValueError("zeta1/zeta2 must match alpha in length")
        if any(abs(v) >= 1 for v in z1):
            raise ValueError("zeta1 entries must lie in (-1, 1)")

    @property
    def p(self):
        return len(self.alpha)

    @property
    def q(self):
        return len(self.beta)


@dataclass(frozen=True)
class TGarchParams:
    """GJR threshold model in the variance: sigma2 = omega
    + (alpha + gamma_lev 1[eps<0]) eps^2 + beta sigma2."""

    omega: float
    alpha: float
    beta: float
    gamma_lev: float = 0.0
    innovation: object = "norm"

    def __post_init__(self):
        object.__setattr__(self, "innovation", _as_density(self.innovation))
        if not self.omega > 0:
            raise ValueError("omega must be > 0")
        if self.alpha < 0 or self.beta < 0:
            raise ValueError("alpha and beta must be >= 0")
        if self.alpha + self.gamma_lev < 0:
            raise ValueError("alpha + gamma_lev must be >= 0")


@dataclass(frozen=True)
class VolatilityPath:
    """Filtered conditional standard deviations and standardized residuals."""

    sigma: np.ndarray
    z: np.ndarray


def shock_expectation(density, zeta1=0.0, zeta2=0.0, delta=2.0):
    """rho = E (|z - zeta2| - zeta1 (z - zeta2))^delta under `density`.

    Adaptive quadrature at absolute tolerance 1e-9, with the domain
    truncated where the innovation density falls below 1e-14 and split at
    the kink z = zeta2.
    """
    d = _as_density(density)
    if zeta1 == 0.0 and zeta2 == 0.0 and delta == 2.0:
        return 1.0  # E[z^2] = 1 under the standardization contract
    bound = d.support_bound()

    def integrand(z):
        u = z - zeta2
        return (abs(u) - zeta1 * u) ** delta * float(np.exp(d.log_pdf(np.array([z]))[0]))

    lo, hi = -bound, bound
    pieces = []
    cuts = [lo] + ([zeta2] if lo < zeta2 < hi else []) + [hi]
    for a, b in zip(cuts, cuts[1:]):
        val, err = integrate.quad(integrand, a, b, epsabs=1e-9, limit=400)
        if not math.isfinite(val):
            raise ArithmeticError("quadrature for the shock expectation failed")
        pieces.append(val)
    return float(sum(pieces))


def persistence(p: FGarchParams) -> float:
    """P = sum beta_j + sum alpha_j rho_j."""
    total = sum(p.beta)
    for a, z1, z2 in zip(p.alpha, p.zeta1, p.zeta2):
        if a > 0:
            total += a * shock_expectation(p.innovation, z1, z2, p.gamma)
    return float(total)


def unconditional_variance_from(omega: float, P: float, gamma: float = 2.0) -> float:
    """omega / (1 - P)^(2/gamma) for an already-known persistence."""
    if P >= 1.0:
        raise ValueError(f"non-stationary: persistence {P:.6f} >= 1")
    return omega / (1.0 - P) ** (2.0 / gamma)


def unconditional_variance(p: FGarchParams) -> float:
    """omega / (1 - P)^(2/gamma) with P from `persistence`."""
    return unconditional_variance_from(p.omega, persistence(p), p.gamma)


def half_life(P: float) -> float:
    """Days for a variance shock to decay to half: ln(1/2)/ln(P)."""
    if P <= 0.0:
        raise ValueError("persistence must be > 0")
    if P >= 1.0:
        warnings.warn("persistence >= 1: half-life is infinite")
        return math.inf
    return math.log(0.5) / math.log(P)


def decay_curve(P: float, days: int) -> np.ndarray:
    """P^d for d = 1..days."""
    return P ** np.arange(1, days + 1, dtype=float)


def _sigma_gamma0(p: FGarchParams) -> float:
    P = persistence(p)
    if P >= 1.0:
        raise ValueError(f"non-stationary: persistence {P:.6f} >= 1")
    return p.omega / (1.0 - P)


def filter(eps, p: FGarchParams) -> VolatilityPath:  # noqa: A001 - domain term
    """Run the sigma^gamma recursion over a residual series."""
    e = np.asarray(eps, dtype=float)
    sg, flag = fgarch_filter(
        e, p.omega, np.asarray(p.alpha), np.asarray(p.beta), p.gamma,
        np.asarray(p.zeta1), np.asarray(p.zeta2), _sigma_gamma0(p))
    if flag:
        raise ArithmeticError(f"non-positive sigma^gamma at t={flag - 1}")
    sigma = sg ** (1.0 / p.gamma)
    return VolatilityPath(sigma=sigma, z=e / sigma)


def simulate(p: FGarchParams, n: int, burn: int = 1000, seed=None) -> np.ndarray:
    """Draw eps_t = sigma_t z_t from the model; `burn` points discarded."""
    sg0 = _sigma_gamma0(p)  # also rejects explosive parameter sets
    z = p.innovation.sample(n + burn, seed=seed)
    eps, _, flag = fgarch_simulate_path(
        z, p.omega, np.asarray(p.alpha), np.asarray(p.beta), p.gamma,
        np.asarray(p.zeta1), np.asarray(p.zeta2), sg0)
    if flag:
        raise ArithmeticError(f"recursion failed at t={flag - 1}")
    return eps[burn:]


# ---------------------------------------------------------------------------
# TGARCH
# ---------------------------------------------------------------------------


def tgarch_as_fgarch(t: TGarchParams) -> FGarchParams:
    """Express the threshold model in family coordinates.

    With gamma=2 and zeta2=0 the shock term is
    alpha_g (|z| - zeta1 z)^2 sigma^2 = alpha_g (1 -/+ zeta1)^2 eps^2,
    so matching the two signs gives alpha_g (1 - zeta1)^2 = alpha and
    alpha_g (1 + zeta1)^2 = alpha + gamma_lev.
    """
    lo = math.sqrt(t.alpha)
    hi = math.sqrt(t.alpha + t.gamma_lev)
    if lo + hi == 0.0:
        zeta1 = 0.0
        alpha_g = 0.0
    else:
        zeta1 = (hi - lo) / (hi + lo)
        alpha_g = t.alpha / (1.0 - zeta1) ** 2 if zeta1 != 1.0 else ((lo + hi) / 2.0) ** 2
    return FGarchParams(omega=t.omega, alpha=(alpha_g,), beta=(t.beta,),
                        gamma=2.0, zeta1=(zeta1,), zeta2=(0.0,),
                        innovation=t.innovation)


def tgarch_persistence(t: TGarchParams) -> float:
    return persistence(tgarch_as_fgarch(t))


def tgarch_unconditional_variance(t: TGarchParams) -> float:
    return unconditional_variance(tgarch_as_fgarch(t))


def filter_tgarch(eps, t: TGarchParams) -> VolatilityPath:
    """Run the squared-variance threshold recursion."""
    e = np.asarray(eps, dtype=float)
    s20 = tgarch_unconditional_variance(t)
    s2, flag = tgarch_filter(e, t.omega, t.alpha, t.beta, t.gamma_lev, s20)
    if flag:
        raise ArithmeticError(f"non-positive variance at t={flag - 1}")
    sigma = np.sqrt(s2)
    return VolatilityPath(sigma=sigma, z=e / sigma)


def news_impact(t: TGarchParams, eps_grid) -> np.ndarray:
    """sigma^2 response to a previous-period shock, holding the state at
    its unconditional level."""
    e = np.asarray(eps_grid, dtype=float)
    s2bar = tgarch_unconditional_variance(t)
    coef = t.alpha + t.gamma_lev * (e < 0)
    return t.omega + coef * e * e + t.beta * s2bar
