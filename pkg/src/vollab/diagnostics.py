"""Residual diagnostics: weighted Ljung-Box, ARCH LM, Portmanteau-Q.

The weighted Ljung-Box statistic applies linearly declining lag weights
w_k = (m - k + 1)/m to the usual n(n+2) rho_k^2/(n-k) terms; its null
distribution is approximated by a gamma whose two moments match the
weighted sum of chi-squares, with a degrees-of-freedom correction for
fitted parameters.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats

KINDS = ("WLB-SR", "WLB-SSR", "ARCH-LM", "PQ")


@dataclass(frozen=True)
class TestResult:
    statistic: float
    p_value: float
    lag: int
    kind: str

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown test kind {self.kind!r}")
        if not 0.0 <= self.p_value <= 1.0:
            raise ValueError(f"p-value {self.p_value!r} outside [0, 1]")


def _acf(x, nlags):
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    d = x - x.mean()
    denom = float(d @ d)
    if denom <= 0.0:
        return np.zeros(nlags)
    return np.array([float(d[k:] @ d[:-k]) / denom for k in range(1, nlags + 1)])


def weighted_ljung_box(z, lag, fitdf=0, kind="WLB-SR") -> TestResult:
    """Fisher-Gallagher weighted portmanteau test.

    `fitdf` is the number of fitted parameters absorbed by the residuals
    (ARMA order sum on standardized residuals, GARCH order sum on their
    squares).
    """
    x = np.asarray(z, dtype=float)
    n = x.shape[0]
    m = int(lag)
    if m >= n:
        raise ValueError("lag must be smaller than the sample size")
    if not m > fitdf >= 0:
        raise ValueError("need lag > fitdf >= 0")
    rho = _acf(x, m)
    w = (m - np.arange(1, m + 1) + 1.0) / m
    q = float(n * (n + 2.0) * np.sum(w * rho**2 / (n - np.arange(1, m + 1))))
    # gamma approximation: two-moment match of the weighted chi-square sum
    # with a degrees-of-freedom shift of 6m*fitdf in the second-moment term
    denom = 2.0 * m**2 + 3.0 * m + 1.0 - 6.0 * m * fitdf
    if denom <= 0:
        raise ValueError("fitdf too large for this lag")
    shape = 0.75 * m * (m + 1.0) ** 2 / denom
    scale = (2.0 / 3.0) * denom / (m * (m + 1.0))
    p = float(stats.gamma.sf(q, a=shape, scale=scale))
    return TestResult(statistic=q, p_value=p, lag=m, kind=kind)


def arch_lm(eps, lag) -> TestResult:
    """Engle's LM test: n R^2 from regressing eps^2 on its own lags."""
    x = np.asarray(eps, dtype=float)
    m = int(lag)
    if m < 1:
        raise ValueError("lag must be >= 1")
    e2 = x * x
    n = e2.shape[0] - m
    if n < m + 2:
        raise ValueError("sample too short for the requested lag")
    y = e2[m:]
    X = np.column_stack([np.ones(n)] + [e2[m - k:-k] for k in range(1, m + 1)])
    beta, res, rank, _ = np.linalg.lstsq(X, y, rcond=None)
    if rank < X.shape[1]:
        raise ArithmeticError("collinear design in the LM regression")
    fitted = X @ beta
    ss_res = float(np.sum((y - fitted) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 0.0
    stat = n * r2
    p = float(stats.chi2.sf(stat, df=m))
    return TestResult(statistic=stat, p_value=p, lag=m, kind="ARCH-LM")


def portmanteau_q(eps2, lag) -> TestResult:
    """Ljung-Box statistic on squared residuals with a chi-square p-value."""
    x = np.asarray(eps2, dtype=float)
    n = x.shape[0]
    m = int(lag)
    if m >= n:
        raise ValueError("lag must be smaller than the sample size")
    if np.var(x) <= 0:
        return TestResult(statistic=0.0, p_value=1.0, lag=m, kind="PQ")
    rho = _acf(x, m)
    q = float(n * (n + 2.0) * np.sum(rho**2 / (n - np.arange(1, m + 1))))
    p = float(stats.chi2.sf(q, df=m))
    return TestResult(statistic=q, p_value=p, lag=m, kind="PQ")
