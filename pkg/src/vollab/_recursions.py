"""Numba kernels for the sequential model recursions.

Everything here is a plain function of float64 arrays/scalars so the MLE
objective can call it thousands of times without Python-loop overhead.
Kernels return a status flag instead of raising; callers translate flags
into exceptions (numba cannot raise with formatted context cheaply).

Flags: 0 ok, >0 index of the first offending observation + 1.
"""

from __future__ import annotations

import numpy as np
from numba import njit

# ---------------------------------------------------------------------------
# ARMA mean filter
# ---------------------------------------------------------------------------


@njit(cache=True)
def arma_residuals(r, intercept, ar, ma, presample_r):
    """eps_t = r_t - (intercept + sum ar_j r_{t-j} + sum ma_j eps_{t-j}).

    Pre-sample r set to `presample_r`, pre-sample eps to 0.
    """
    n = r.shape[0]
    m = ar.shape[0]
    q = ma.shape[0]
    eps = np.empty(n)
    for t in range(n):
        mu = intercept
        for j in range(m):
            mu += ar[j] * (r[t - j - 1] if t - j - 1 >= 0 else presample_r)
        for j in range(q):
            mu += ma[j] * (eps[t - j - 1] if t - j - 1 >= 0 else 0.0)
        eps[t] = r[t] - mu
    return eps


@njit(cache=True)
def arma_simulate(eps, intercept, ar, ma, presample_r):
    """Invert arma_residuals: build r from innovations eps."""
    n = eps.shape[0]
    m = ar.shape[0]
    q = ma.shape[0]
    r = np.empty(n)
    for t in range(n):
        mu = intercept
        for j in range(m):
            mu += ar[j] * (r[t - j - 1] if t - j - 1 >= 0 else presample_r)
        for j in range(q):
            mu += ma[j] * (eps[t - j - 1] if t - j - 1 >= 0 else 0.0)
        r[t] = mu + eps[t]
    return r


# ---------------------------------------------------------------------------
# fGARCH
# ---------------------------------------------------------------------------


@njit(cache=True)
def fgarch_filter(eps, omega, alpha, beta, gam, zeta1, zeta2, sg0):
    """sigma^gamma recursion of the omnibus family model.

    sg0 is the pre-sample value of sigma^gamma (and of the shock term's
    sigma^gamma factor).  Returns (sigma_gamma, flag).
    """
    n = eps.shape[0]
    p = alpha.shape[0]
    q = beta.shape[0]
    sg = np.empty(n)
    flag = 0
    inv_gam = 1.0 / gam
    for t in range(n):
        v = omega
        for j in range(p):
            if t - j - 1 >= 0:
                sgl = sg[t - j - 1]
                z = eps[t - j - 1] / sgl ** inv_gam
            else:
                sgl = sg0
                z = 0.0
            c = abs(z - zeta2[j]) - zeta1[j] * (z - zeta2[j])
            v += alpha[j] * sgl * c ** gam
        for j in range(q):
            v += beta[j] * (sg[t - j - 1] if t - j - 1 >= 0 else sg0)
        if not np.isfinite(v) or v <= 0.0:
            flag = t + 1
            v = 1e-10
        sg[t] = v
    return sg, flag


@njit(cache=True)
def fgarch_simulate_path(z, omega, alpha, beta, gam, zeta1, zeta2, sg0):
    """eps_t = sigma_t z_t with the family recursion; returns (eps, sigma_gamma, flag)."""
    n = z.shape[0]
    p = alpha.shape[0]
    q = beta.shape[0]
    sg = np.empty(n)
    eps = np.empty(n)
    flag = 0
    inv_gam = 1.0 / gam
    for t in range(n):
        v = omega
        for j in range(p):
            if t - j - 1 >= 0:
                sgl = sg[t - j - 1]
                zl = z[t - j - 1]
            else:
                sgl = sg0
                zl = 0.0
            c = abs(zl - zeta2[j]) - zeta1[j] * (zl - zeta2[j])
            v += alpha[j] * sgl * c ** gam
        for j in range(q):
            v += beta[j] * (sg[t - j - 1] if t - j - 1 >= 0 else sg0)
        if not np.isfinite(v) or v <= 0.0:
            flag = t + 1
            v = 1e-10
        sg[t] = v
        eps[t] = v ** inv_gam * z[t]
    return eps, sg, flag


@njit(cache=True)
def tgarch_filter(eps, omega, alpha, beta, gam_lev, s20):
    """GJR threshold recursion: sigma2_t = w + (a + g*1[eps<0]) eps^2 + b sigma2."""
    n = eps.shape[0]
    s2 = np.empty(n)
    flag = 0
    for t in range(n):
        if t == 0:
            prev_s2 = s20
            prev_e = 0.0
        else:
            prev_s2 = s2[t - 1]
            prev_e = eps[t - 1]
        coef = alpha + (gam_lev if prev_e < 0.0 else 0.0)
        v = omega + coef * prev_e * prev_e + beta * prev_s2
        if not np.isfinite(v) or v <= 0.0:
            flag = t + 1
            v = 1e-10
        s2[t] = v
    return s2, flag


# ---------------------------------------------------------------------------
# CGARCH
# ---------------------------------------------------------------------------


@njit(cache=True)
def cgarch_filter(eps, omega, rho, phi, alpha, beta, m0, s20):
    """Permanent/transitory recursion; returns (sigma2, m, flag)."""
    n = eps.shape[0]
    s2 = np.empty(n)
    m = np.empty(n)
    flag = 0
    prev_m = m0
    prev_s2 = s20
    prev_e2 = s20  # E[eps^2] = sigma2 at the stationary start
    for t in range(n):
        mt = omega + rho * (prev_m - omega) + phi * (prev_e2 - prev_s2)
        qt = alpha * (prev_e2 - prev_m) + beta * (prev_s2 - prev_m)
        v = mt + qt
        if not np.isfinite(v) or v <= 0.0:
            flag = t + 1
            v = 1e-10
            mt = v
        m[t] = mt
        s2[t] = v
        prev_m = mt
        prev_s2 = v
        prev_e2 = eps[t] * eps[t]
    return s2, m, flag


@njit(cache=True)
def cgarch_simulate_path(z, omega, rho, phi, alpha, beta, m0, s20):
    """Returns (eps, sigma2, m, flag)."""
    n = z.shape[0]
    s2 = np.empty(n)
    m = np.empty(n)
    eps = np.empty(n)
    flag = 0
    prev_m = m0
    prev_s2 = s20
    prev_e2 = s20
    for t in range(n):
        mt = omega + rho * (prev_m - omega) + phi * (prev_e2 - prev_s2)
        qt = alpha * (prev_e2 - prev_m) + beta * (prev_s2 - prev_m)
        v = mt + qt
        if not np.isfinite(v) or v <= 0.0:
            flag = t + 1
            v = 1e-10
            mt = v
        m[t] = mt
        s2[t] = v
        eps[t] = np.sqrt(v) * z[t]
        prev_m = mt
        prev_s2 = v
        prev_e2 = eps[t] * eps[t]
    return eps, s2, m, flag


# ---------------------------------------------------------------------------
# GAS with Normal / Student-t observation density
# ---------------------------------------------------------------------------
# theta = (mu, lam) with sigma = exp(lam); scores:
#   Normal:  d_mu = z/sigma, d_lam = z^2 - 1
#   t(nu) standardized (unit variance): with s2 = nu/(nu-2), x2 = s2 z^2
#            d_mu = (nu+1) s2 z / (nu + x2) / sigma
#            d_lam = (nu+1) x2 / (nu + x2) - 1
# Identity scaling (power 0) or inverse-information (power 1) / sqrt (0.5)
# with the constant conditional information of the standardized family.


@njit(cache=True)
def _gas_scores(r, mu, lam, nu, is_t):
    sigma = np.exp(lam)
    z = (r - mu) / sigma
    if is_t:
        s2 = nu / (nu - 2.0)
        x2 = s2 * z * z
        d_mu = (nu + 1.0) * s2 * z / (nu + x2) / sigma
        d_lam = (nu + 1.0) * x2 / (nu + x2) - 1.0
    else:
        d_mu = z / sigma
        d_lam = z * z - 1.0
    return d_mu, d_lam


@njit(cache=True)
def _gas_info(nu, is_t, sigma):
    """Diagonal of the conditional information matrix for (mu, lam)."""
    if is_t:
        s2 = nu / (nu - 2.0)
        i_mu = (nu + 1.0) / (nu + 3.0) * s2 / (sigma * sigma)
        i_lam = 2.0 * nu / (nu + 3.0)
    else:
        i_mu = 1.0 / (sigma * sigma)
        i_lam = 2.0
    return i_mu, i_lam


@njit(cache=True)
def gas_filter_kernel(r, kappa, a, b, nu, is_t, power, theta0, clip):
    """Location/log-scale GAS(1,1); returns (theta path n x 2, s path n x 2, flag)."""
    n = r.shape[0]
    theta = np.empty((n, 2))
    s = np.empty((n, 2))
    flag = 0
    mu = theta0[0]
    lam = theta0[1]
    for t in range(n):
        theta[t, 0] = mu
        theta[t, 1] = lam
        d_mu, d_lam = _gas_scores(r[t], mu, lam, nu, is_t)
        if power > 0.0:
            i_mu, i_lam = _gas_info(nu, is_t, np.exp(lam))
            d_mu = d_mu / i_mu**power
            d_lam = d_lam / i_lam**power
        if not (np.isfinite(d_mu) and np.isfinite(d_lam)):
            flag = t + 1
            d_mu = 0.0
            d_lam = 0.0
        if d_mu > clip:
            d_mu = clip
        elif d_mu < -clip:
            d_mu = -clip
        if d_lam > clip:
            d_lam = clip
        elif d_lam < -clip:
            d_lam = -clip
        s[t, 0] = d_mu
        s[t, 1] = d_lam
        mu = kappa[0] + a[0] * d_mu + b[0] * mu
        lam = kappa[1] + a[1] * d_lam + b[1] * lam
        if abs(lam) > 50.0 or not np.isfinite(mu):
            flag = t + 1 if flag == 0 else flag
            if lam > 50.0:
                lam = 50.0
            elif lam < -50.0:
                lam = -50.0
            if not np.isfinite(mu):
                mu = kappa[0]
    return theta, s, flag


@njit(cache=True)
def gas_simulate_kernel(z, kappa, a, b, nu, is_t, power, theta0, clip):
    """Draws r_t = mu_t + exp(lam_t) z_t, updating theta; returns (r, theta, flag)."""
    n = z.shape[0]
    r = np.empty(n)
    theta = np.empty((n, 2))
    flag = 0
    mu = theta0[0]
    lam = theta0[1]
    for t in range(n):
        theta[t, 0] = mu
        theta[t, 1] = lam
        r[t] = mu + np.exp(lam) * z[t]
        d_mu, d_lam = _gas_scores(r[t], mu, lam, nu, is_t)
        if power > 0.0:
            i_mu, i_lam = _gas_info(nu, is_t, np.exp(lam))
            d_mu = d_mu / i_mu**power
            d_lam = d_lam / i_lam**power
        if d_mu > clip:
            d_mu = clip
        elif d_mu < -clip:
            d_mu = -clip
        if d_lam > clip:
            d_lam = clip
        elif d_lam < -clip:
            d_lam = -clip
        mu = kappa[0] + a[0] * d_mu + b[0] * mu
        lam = kappa[1] + a[1] * d_lam + b[1] * lam
        if abs(mu) > 1e6 or abs(lam) > 50.0:
            flag = t + 1
            break
    return r, theta, flag


@njit(cache=True)
def gas_variance_filter(r, mu, kappa, a, b, s20):
    """Normal GAS in the variance coordinate with inverse-information scaling:
    s_t = eps^2 - sigma2, i.e. sigma2_{t+1} = kappa + a (eps^2 - sigma2) + b sigma2,
    algebraically a GARCH(1,1) with omega=kappa, alpha=a, beta=b-a.
    Returns (sigma2, flag)."""
    n = r.shape[0]
    s2 = np.empty(n)
    flag = 0
    v = s20
    for t in range(n):
        if not np.isfinite(v) or v <= 0.0:
            flag = t + 1
            v = 1e-10
        s2[t] = v
        e2 = (r[t] - mu) * (r[t] - mu)
        v = kappa + a * (e2 - v) + b * v
    return s2, flag


# ---------------------------------------------------------------------------
# Beta-Skew-t-EGARCH
# ---------------------------------------------------------------------------


@njit(cache=True)
def _skewt_score(y, mu_zstar, nu, eta):
    """Conditional score u = dlogp(R|lam)/dlam at y = R*exp(-lam).

    w = y + mu_zstar is the uncentred skew-t variable; the FS transform
    evaluates the symmetric t density at w/eta (w>=0) or w*eta (w<0).
    """
    w = y + mu_zstar
    if w >= 0.0:
        x = w / eta
        dlogg = (-(nu + 1.0) * x / (nu + x * x)) / eta
    else:
        x = w * eta
        dlogg = (-(nu + 1.0) * x / (nu + x * x)) * eta
    return -1.0 - y * dlogg


@njit(cache=True)
def beta_egarch_filter1(R, omega, phi1, k1, kstar, nu, eta, mu_zstar):
    """One-component recursion; returns (lam, lam_dag, u, flag)."""
    n = R.shape[0]
    lam = np.empty(n)
    ldag = np.empty(n)
    u = np.empty(n)
    flag = 0
    prev = 0.0
    for t in range(n):
        ldag[t] = prev
        lam[t] = omega + prev
        if not np.isfinite(lam[t]) or abs(lam[t]) > 50.0:
            flag = t + 1
            lam[t] = 50.0 if lam[t] > 0 else -50.0
        y = R[t] * np.exp(-lam[t])
        u[t] = _skewt_score(y, mu_zstar, nu, eta)
        lev = kstar * (-1.0 if R[t] > 0.0 else (1.0 if R[t] < 0.0 else 0.0)) * (u[t] + 1.0)
        prev = phi1 * prev + k1 * u[t] + lev
    return lam, ldag, u, flag


@njit(cache=True)
def beta_egarch_filter2(R, omega, phi1, phi2, k1, k2, kstar, nu, eta, mu_zstar):
    """Two-component recursion (leverage in the short-run component only);
    returns (lam, lam1, lam2, u, flag)."""
    n = R.shape[0]
    lam = np.empty(n)
    l1 = np.empty(n)
    l2 = np.empty(n)
    u = np.empty(n)
    flag = 0
    p1 = 0.0
    p2 = 0.0
    for t in range(n):
        l1[t] = p1
        l2[t] = p2
        lam[t] = omega + p1 + p2
        if not np.isfinite(lam[t]) or abs(lam[t]) > 50.0:
            flag = t + 1
            lam[t] = 50.0 if lam[t] > 0 else -50.0
        y = R[t] * np.exp(-lam[t])
        u[t] = _skewt_score(y, mu_zstar, nu, eta)
        sgn = -1.0 if R[t] > 0.0 else (1.0 if R[t] < 0.0 else 0.0)
        lev = kstar * sgn * (u[t] + 1.0)
        p1n = phi1 * p1 + k1 * u[t]
        p2n = phi2 * p2 + k2 * u[t] + lev
        p1 = p1n
        p2 = p2n
    return lam, l1, l2, u, flag


@njit(cache=True)
def beta_egarch_simulate1(z, omega, phi1, k1, kstar, nu, eta, mu_zstar):
    """R_t = exp(lam_t) z_t with the one-component recursion; (R, lam, flag)."""
    n = z.shape[0]
    R = np.empty(n)
    lam = np.empty(n)
    flag = 0
    prev = 0.0
    for t in range(n):
        lam[t] = omega + prev
        if abs(lam[t]) > 50.0:
            flag = t + 1
            break
        R[t] = np.exp(lam[t]) * z[t]
        y = z[t]
        u = _skewt_score(y, mu_zstar, nu, eta)
        sgn = -1.0 if R[t] > 0.0 else (1.0 if R[t] < 0.0 else 0.0)
        prev = phi1 * prev + k1 * u + kstar * sgn * (u + 1.0)
    return R, lam, flag


@njit(cache=True)
def beta_egarch_simulate2(z, omega, phi1, phi2, k1, k2, kstar, nu, eta, mu_zstar):
    n = z.shape[0]
    R = np.empty(n)
    lam = np.empty(n)
    flag = 0
    p1 = 0.0
    p2 = 0.0
    for t in range(n):
        lam[t] = omega + p1 + p2
        if abs(lam[t]) > 50.0:
            flag = t + 1
            break
        R[t] = np.exp(lam[t]) * z[t]
        u = _skewt_score(z[t], mu_zstar, nu, eta)
        sgn = -1.0 if R[t] > 0.0 else (1.0 if R[t] < 0.0 else 0.0)
        p1n = phi1 * p1 + k1 * u
        p2n = phi2 * p2 + k2 * u + kstar * sgn * (u + 1.0)
        p1 = p1n
        p2 = p2n
    return R, lam, flag
