"""One- and two-component Beta-Skew-t-EGARCH filters.

Returns follow R_t = exp(lambda_t) z_t where z_t is a centered skew-t on
the natural Student-t scale: z_t = z*_t - mu_z*, with z* an uncentred
Fernandez-Steel skew-t (two-piece t with asymmetry eta) and
mu_z* = M1 (eta - 1/eta), M1 = E|T_nu|.  The log-scale evolves through
its conditional score

    u_t = d log p(R_t | lambda_t) / d lambda_t,

which is bounded in R_t, so single outliers cannot blow up the filter.
One component:

    lambda_t = omega + ldag_t,
    ldag_t = phi1 ldag_{t-1} + kappa1 u_{t-1}
             + kappa_star sgn(-R_{t-1}) (u_{t-1} + 1)

Two components put the leverage term in the short-run component only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from ._recursions import (
    beta_egarch_filter1,
    beta_egarch_filter2,
    beta_egarch_simulate1,
    beta_egarch_simulate2,
)


def t_abs_moment(nu: float) -> float:
    """E|T_nu| for a Student t on its natural scale (nu > 1)."""
    if nu <= 1:
        raise ValueError("nu must be > 1")
    return (2.0 * math.sqrt(nu) / (math.sqrt(math.pi) * (nu - 1.0))
            * math.exp(gammaln((nu + 1.0) / 2.0) - gammaln(nu / 2.0)))


def skewt_mean(nu: float, eta: float) -> float:
    """Mean mu_z* of the uncentred two-piece skew-t."""
    return t_abs_moment(nu) * (eta - 1.0 / eta)


@dataclass(frozen=True)
class BetaEgarchParams:
    """Log-scale intercept, component dynamics, leverage, and skew-t shape."""

    omega: float
    phi1: float
    kappa1: float
    kappa_star: float = 0.0
    nu: float = 10.0
    eta: float = 1.0
    components: int = 1
    phi2: float = 0.0
    kappa2: float = 0.0

    def __post_init__(self):
        if self.components not in (1, 2):
            raise ValueError("components must be 1 or 2")
        if not abs(self.phi1) < 1:
            raise ValueError("|phi1| must be < 1")
        if self.components == 2:
            if not abs(self.phi2) < 1:
                raise ValueError("|phi2| must be < 1")
            if self.phi1 == self.phi2:
                raise ValueError("phi1 = phi2 is not identifiable")
        if not self.nu > 2:
            raise ValueError("nu must be > 2")
        if not self.eta > 0:
            raise ValueError("eta must be > 0")

    @property
    def mu_zstar(self):
        return skewt_mean(self.nu, self.eta)


@dataclass(frozen=True)
class LogVolPath:
    """Per-t log-scale, its components, and the conditional score."""

    lam: np.ndarray
    lam1: np.ndarray
    lam2: np.ndarray
    u: np.ndarray

    @property
    def sigma(self):
        return np.exp(self.lam)


def conditional_score(R, lam, nu, eta):
    """u = d log p(R | lambda) / d lambda for the centered skew-t.

    With y = R exp(-lambda) and w = y + mu_z*, the density evaluates the
    symmetric t at w/eta (w >= 0) or w*eta (w < 0), giving
    u = -1 - y * dlog f / dw.
    """
    R = np.asarray(R, dtype=float)
    lam = np.asarray(lam, dtype=float)
    if not (np.all(np.isfinite(R)) and np.all(np.isfinite(lam))):
        raise ValueError("conditional_score requires finite inputs")
    mu = skewt_mean(nu, eta)
    y = R * np.exp(-lam)
    w = y + mu
    x = np.where(w >= 0.0, w / eta, w * eta)
    scale = np.where(w >= 0.0, 1.0 / eta, eta)
    dlogg = -(nu + 1.0) * x / (nu + x * x) * scale
    out = -1.0 - y * dlogg
    return out if out.ndim else float(out)


def log_pdf(R, lam, nu, eta):
    """Log density of R under the centered skew-t at log-scale lambda."""
    R = np.asarray(R, dtype=float)
    lam = np.asarray(lam, dtype=float)
    mu = skewt_mean(nu, eta)
    y = R * np.exp(-lam)
    w = y + mu
    x = np.where(w >= 0.0, w / eta, w * eta)
    logc = (gammaln((nu + 1.0) / 2.0) - gammaln(nu / 2.0)
            - 0.5 * math.log(nu * math.pi))
    logf = logc - (nu + 1.0) / 2.0 * np.log1p(x * x / nu)
    out = math.log(2.0 / (eta + 1.0 / eta)) + logf - lam
    return out if out.ndim else float(out)


def _check(p, want_components=None):
    if want_components is not None and p.components != want_components:
        raise ValueError(f"expected a {want_components}-component parameter set")


def filter_one(R, p: BetaEgarchParams) -> LogVolPath:
    """One-component recursion from ldag_0 = 0."""
    _check(p, 1)
    x = np.asarray(R, dtype=float)
    lam, ldag, u, flag = beta_egarch_filter1(
        x, p.omega, p.phi1, p.kappa1, p.kappa_star, p.nu, p.eta, p.mu_zstar)
    if flag:
        raise ArithmeticError(f"non-finite log-scale at t={flag - 1}")
    return LogVolPath(lam=lam, lam1=ldag, lam2=np.zeros_like(lam), u=u)


def filter_two(R, p: BetaEgarchParams) -> LogVolPath:
    """Two-component recursion; leverage enters the short-run component."""
    _check(p, 2)
    x = np.asarray(R, dtype=float)
    lam, l1, l2, u, flag = beta_egarch_filter2(
        x, p.omega, p.phi1, p.phi2, p.kappa1, p.kappa2, p.kappa_star,
        p.nu, p.eta, p.mu_zstar)
    if flag:
        raise ArithmeticError(f"non-finite log-scale at t={flag - 1}")
    return LogVolPath(lam=lam, lam1=l1, lam2=l2, u=u)


def shock_response_shares(p: BetaEgarchParams):
    """(long, short) share of a score shock: kappa_i / (kappa1 + kappa2)."""
    _check(p, 2)
    total = p.kappa1 + p.kappa2
    if total == 0.0:
        return (float("nan"), float("nan"))
    return (p.kappa1 / total, p.kappa2 / total)


def sample_skewt(nu, eta, n, seed=None, rng=None):
    """n centered two-piece skew-t draws on the natural t scale."""
    if rng is None:
        rng = np.random.default_rng(seed)
    absT = np.abs(rng.standard_t(nu, size=n))
    right = rng.random(n) < eta * eta / (1.0 + eta * eta)
    w = np.where(right, eta * absT, -absT / eta)
    return w - skewt_mean(nu, eta)


def simulate_beta(p: BetaEgarchParams, n: int, burn: int = 1000, seed=None):
    """Draw R_t = exp(lambda_t) z_t; deterministic per seed."""
    z = sample_skewt(p.nu, p.eta, n + burn, seed=seed)
    if p.components == 1:
        R, _, flag = beta_egarch_simulate1(
            z, p.omega, p.phi1, p.kappa1, p.kappa_star, p.nu, p.eta, p.mu_zstar)
    else:
        R, _, flag = beta_egarch_simulate2(
            z, p.omega, p.phi1, p.phi2, p.kappa1, p.kappa2, p.kappa_star,
            p.nu, p.eta, p.mu_zstar)
    if flag:
        raise ArithmeticError(f"explosive log-scale at t={flag - 1}")
    return R[burn:]
