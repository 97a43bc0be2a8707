"""Component GARCH: permanent/transitory variance decomposition.

The conditional variance splits into a slowly mean-reverting trend m_t and
a transitory deviation q_t = sigma2_t - m_t:

    m_t = omega + rho (m_{t-1} - omega) + phi (eps^2_{t-1} - sigma2_{t-1})
    sigma2_t = m_t + alpha (eps^2_{t-1} - m_{t-1}) + beta (sigma2_{t-1} - m_{t-1})

with alpha + beta < rho < 1 so the transitory part decays faster than the
permanent one.  Both recursions are forced by martingale differences, so
q_t and m_t behave like AR(1) processes with rates alpha+beta and rho.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._recursions import cgarch_filter, cgarch_simulate_path
from .innovations import StandardizedDensity


def _as_density(innovation):
    if isinstance(innovation, StandardizedDensity):
        return innovation
    return StandardizedDensity(innovation)


@dataclass(frozen=True)
class CGarchParams:
    """Long-run level omega, permanent rate rho and loading phi, and the
    transitory GARCH pair (alpha, beta)."""

    omega: float
    rho: float
    phi: float
    alpha: float
    beta: float
    innovation: object = "norm"

    def __post_init__(self):
        object.__setattr__(self, "innovation", _as_density(self.innovation))
        if not self.omega > 0:
            raise ValueError("omega must be > 0")
        if not 0.0 < self.rho < 1.0:
            raise ValueError("rho must lie in (0, 1)")
        if self.alpha < 0 or self.beta < 0:
            raise ValueError("alpha and beta must be >= 0")
        if not self.alpha + self.beta < self.rho:
            raise ValueError("transitory persistence alpha+beta must be < rho")


@dataclass(frozen=True)
class ComponentPath:
    """Per-t conditional variance with its permanent and transitory parts;
    sigma2 = m + q holds by construction."""

    sigma2: np.ndarray
    m: np.ndarray

    @property
    def q(self):
        return self.sigma2 - self.m


def filter_components(eps, p: CGarchParams) -> ComponentPath:
    """Run the two recursions from m0 = omega, q0 = 0."""
    e = np.asarray(eps, dtype=float)
    s2, m, flag = cgarch_filter(e, p.omega, p.rho, p.phi, p.alpha, p.beta,
                                p.omega, p.omega)
    if flag:
        raise ArithmeticError(f"non-positive variance at t={flag - 1}")
    return ComponentPath(sigma2=s2, m=m)


def component_persistence(p: CGarchParams):
    """(permanent rate rho, transitory rate alpha + beta)."""
    return p.rho, p.alpha + p.beta


def simulate(p: CGarchParams, n: int, burn: int = 1000, seed=None) -> np.ndarray:
    """Draw eps_t = sigma_t z_t from the component model."""
    z = p.innovation.sample(n + burn, seed=seed)
    eps, _, _, flag = cgarch_simulate_path(z, p.omega, p.rho, p.phi,
                                           p.alpha, p.beta, p.omega, p.omega)
    if flag:
        raise ArithmeticError(f"recursion failed at t={flag - 1}")
    return eps[burn:]
