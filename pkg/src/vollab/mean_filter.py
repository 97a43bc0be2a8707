"""ARMA(m,n) conditional-mean filtering.

Produces the residual series eps_t = r_t - mu_t consumed by the variance
models.  Pre-sample residuals are zero and pre-sample returns are set to
the sample mean, which makes conditional likelihoods deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._recursions import arma_residuals, arma_simulate
from .market_data import ReturnSeries


def _check_roots(coefs, label):
    """Roots of 1 - c1 x - ... - ck x^k must lie outside the unit circle."""
    c = np.asarray(coefs, dtype=float)
    if c.size == 0:
        return
    poly = np.concatenate(([1.0], -c))
    roots = np.roots(poly[::-1])
    if roots.size and np.min(np.abs(roots)) <= 1.0 + 1e-10:
        raise ValueError(f"{label} polynomial has a root inside the unit circle")


@dataclass(frozen=True)
class ArmaParams:
    """Mean-equation parameters: intercept, AR and MA coefficient vectors."""

    intercept: float = 0.0
    ar: tuple = field(default_factory=tuple)
    ma: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "ar", tuple(float(a) for a in self.ar))
        object.__setattr__(self, "ma", tuple(float(a) for a in self.ma))
        _check_roots(self.ar, "AR")
        # invertibility is the same root condition on the MA polynomial
        _check_roots(self.ma, "MA")


def _values(r):
    return r.values if isinstance(r, ReturnSeries) else np.asarray(r, dtype=float)


def filter_residuals(r, p: ArmaParams) -> np.ndarray:
    """eps_t = r_t - (intercept + sum ar_j r_{t-j} + sum ma_j eps_{t-j})."""
    x = _values(r)
    presample = float(np.mean(x)) if len(p.ar) else 0.0
    return arma_residuals(x, float(p.intercept),
                          np.asarray(p.ar, dtype=float),
                          np.asarray(p.ma, dtype=float), presample)


def simulate_mean(eps, p: ArmaParams, presample_r=0.0) -> np.ndarray:
    """Invert the filter: rebuild r from innovations eps."""
    e = np.asarray(eps, dtype=float)
    return arma_simulate(e, float(p.intercept),
                         np.asarray(p.ar, dtype=float),
                         np.asarray(p.ma, dtype=float), float(presample_r))


def demean(r) -> np.ndarray:
    """Subtract the sample mean."""
    x = _values(r)
    return x - np.mean(x)
