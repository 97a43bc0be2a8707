"""Registry of standardized innovation distributions.

Every density here is standardized to zero mean and unit variance (the
contract the variance recursions rely on), except where a family's own
convention makes that impossible, in which case the deviation is noted on
the family entry.  Construction is done once per spec; log-density and
sampling are then cheap vectorized calls.

Family tokens and shape conventions
-----------------------------------
norm    : ()                    Gaussian
snorm   : ()                    Fernandez-Steel skewed Gaussian, skew = eta
std     : (nu,)                 Student's t, nu > 2
sstd    : (nu,)                 skewed Student's t, skew = eta
ged     : (kappa,)              generalized error, exponent kappa
sged    : (kappa,)              skewed GED, skew = eta
nig     : (a, b)                normal inverse Gaussian, steepness a > |b|
ghyp    : (lam, a, b)           generalized hyperbolic
ghst    : (nu, beta)            GH skew-Student, nu > 4 when beta != 0
jsu     : (a, b)                Johnson SU (a skewness, b > 0 tail)
ast     : (nu1, nu2, alpha)     asymmetric Student, two tail decays,
                                alpha in (0,1) left-tail weight
ast1    : (nu, alpha)           asymmetric Student, one tail decay
ald     : (kappa,)              asymmetric Laplace, kappa > 0

The `skew` field applies the Fernandez-Steel two-piece transform and is
meaningful for the symmetric families (norm/std/ged and their s-aliases);
eta < 1 gives left skew, eta > 1 right skew.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, special, stats

__all__ = [
    "FAMILIES",
    "InnovationSpec",
    "StandardizedDensity",
    "make_density",
    "fs_skew",
    "score_wrt",
]

FAMILIES = (
    "norm", "snorm", "std", "sstd", "ged", "sged",
    "nig", "ghyp", "ghst", "jsu", "ast", "ast1", "ald",
)

# number of required shape parameters per family
_SHAPE_ARITY = {
    "norm": 0, "snorm": 0, "std": 1, "sstd": 1, "ged": 1, "sged": 1,
    "nig": 2, "ghyp": 3, "ghst": 2, "jsu": 2, "ast": 3, "ast1": 2, "ald": 1,
}

# families where the FS skew parameter is honored
_FS_FAMILIES = {"norm", "snorm", "std", "sstd", "ged", "sged"}

NU_MIN, NU_MAX = 2.01, 100.0
GED_MIN, GED_MAX = 0.1, 20.0


@dataclass(frozen=True)
class InnovationSpec:
    """Innovation distribution identifier: family token + shape + FS skew."""

    family: str
    shape: tuple = ()
    skew: float = 1.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown innovation family {self.family!r}")
        shape = tuple(float(s) for s in np.atleast_1d(np.asarray(self.shape, dtype=float))) if np.size(self.shape) else ()
        object.__setattr__(self, "shape", shape)
        n = _SHAPE_ARITY[self.family]
        if len(shape) != n:
            raise ValueError(
                f"family {self.family!r} takes {n} shape parameter(s), got {len(shape)}"
            )
        if self.skew <= 0:
            raise ValueError("skew parameter must be > 0")
        self._validate_bounds()

    def _validate_bounds(self):
        fam, shape = self.family, self.shape
        if fam in ("std", "sstd"):
            if not (NU_MIN < shape[0] <= NU_MAX):
                raise ValueError(f"nu must be in ({NU_MIN}, {NU_MAX}], got {shape[0]}")
        elif fam in ("ged", "sged"):
            if not (GED_MIN < shape[0] <= GED_MAX):
                raise ValueError(f"GED exponent must be in ({GED_MIN}, {GED_MAX}]")
        elif fam == "nig":
            a, b = shape
            if a <= abs(b) + 1e-6:
                raise ValueError("NIG requires steepness > |asymmetry| + 1e-6")
        elif fam == "ghyp":
            _, a, b = shape
            if a <= abs(b) + 1e-6:
                raise ValueError("GHYP requires a > |b| + 1e-6")
        elif fam == "ghst":
            nu, beta = shape
            if beta != 0.0 and nu <= 4.0:
                raise ValueError("GHST with asymmetry requires nu > 4")
            if beta == 0.0 and nu <= 2.0:
                raise ValueError("GHST requires nu > 2")
        elif fam == "jsu":
            if shape[1] <= 0:
                raise ValueError("JSU tail parameter must be > 0")
        elif fam in ("ast", "ast1"):
            alpha = shape[-1]
            if not (0.0 < alpha < 1.0):
                raise ValueError("AST tail weight alpha must be in (0, 1)")
            for nu in shape[:-1]:
                if nu <= NU_MIN:
                    raise ValueError(f"AST tail decay must exceed {NU_MIN}")
        elif fam == "ald":
            if shape[0] <= 0:
                raise ValueError("ALD asymmetry must be > 0")


class _RawFamily:
    """Un-standardized distribution: log-pdf, sampling and first two moments."""

    def logpdf(self, x):
        raise NotImplementedError

    def rvs(self, n, rng):
        raise NotImplementedError

    def mean_sd(self):
        """(mean, sd) of the raw variable; None entries trigger quadrature."""
        return None, None


class _ScipyRaw(_RawFamily):
    def __init__(self, frozen):
        self.frozen = frozen

    def logpdf(self, x):
        return self.frozen.logpdf(x)

    def rvs(self, n, rng):
        return self.frozen.rvs(size=n, random_state=rng)

    def mean_sd(self):
        m, v = self.frozen.stats(moments="mv")
        return float(m), math.sqrt(float(v))


class _GhSkewT(_RawFamily):
    """GH skew-Student via the normal variance-mean mixture X = b*W + sqrt(W)*Z,
    W ~ InverseGamma(nu/2, nu/2).  Reduces to Student's t at b = 0."""

    def __init__(self, nu, beta):
        self.nu = nu
        self.beta = beta

    def logpdf(self, x):
        nu, b = self.nu, self.beta
        x = np.asarray(x, dtype=float)
        if b == 0.0:
            return stats.t.logpdf(x, nu)
        q = np.sqrt(nu + x * x)
        arg = np.abs(b) * q
        # log K_{(nu+1)/2}(arg) without overflow: kve = K * exp(arg)
        logk = np.log(special.kve((nu + 1.0) / 2.0, arg)) - arg
        return (
            (1.0 - nu) / 2.0 * math.log(2.0)
            + nu / 2.0 * math.log(nu)
            + (nu + 1.0) / 2.0 * math.log(abs(b))
            + logk
            + b * x
            - special.gammaln(nu / 2.0)
            - 0.5 * math.log(math.pi)
            - (nu + 1.0) / 2.0 * np.log(q)
        )

    def rvs(self, n, rng):
        w = (self.nu / 2.0) / rng.gamma(self.nu / 2.0, 1.0, size=n)
        return self.beta * w + np.sqrt(w) * rng.standard_normal(n)

    def mean_sd(self):
        nu, b = self.nu, self.beta
        if b == 0.0:
            return 0.0, math.sqrt(nu / (nu - 2.0))
        m = b * nu / (nu - 2.0)
        v = b * b * 2.0 * nu * nu / ((nu - 2.0) ** 2 * (nu - 4.0)) + nu / (nu - 2.0)
        return m, math.sqrt(v)


def _t_norm_const(nu):
    """K(nu) = Gamma((nu+1)/2) / (sqrt(pi*nu) Gamma(nu/2))."""
    return math.exp(
        special.gammaln((nu + 1.0) / 2.0)
        - special.gammaln(nu / 2.0)
        - 0.5 * math.log(math.pi * nu)
    )


class _Ast(_RawFamily):
    """Zhu-Galbraith asymmetric Student's t, continuous-at-zero form."""

    def __init__(self, nu1, nu2, alpha):
        self.nu1, self.nu2, self.alpha = nu1, nu2, alpha
        k1, k2 = _t_norm_const(nu1), _t_norm_const(nu2)
        self.astar = alpha * k1 / (alpha * k1 + (1.0 - alpha) * k2)
        self.k1, self.k2 = k1, k2

    def logpdf(self, x):
        x = np.asarray(x, dtype=float)
        a, astar = self.alpha, self.astar
        left = (
            math.log(a / astar * self.k1)
            - (self.nu1 + 1.0) / 2.0
            * np.log1p((x / (2.0 * astar)) ** 2 / self.nu1)
        )
        right = (
            math.log((1.0 - a) / (1.0 - astar) * self.k2)
            - (self.nu2 + 1.0) / 2.0
            * np.log1p((x / (2.0 * (1.0 - astar))) ** 2 / self.nu2)
        )
        return np.where(x <= 0.0, left, right)

    def rvs(self, n, rng):
        # left branch (prob alpha): -2*astar*|T_nu1|; right: 2*(1-astar)*|T_nu2|
        u = rng.random(n)
        t1 = np.abs(stats.t.rvs(self.nu1, size=n, random_state=rng))
        t2 = np.abs(stats.t.rvs(self.nu2, size=n, random_state=rng))
        return np.where(
            u < self.alpha,
            -2.0 * self.astar * t1,
            2.0 * (1.0 - self.astar) * t2,
        )


class _FsSkewed(_RawFamily):
    """Fernandez-Steel two-piece skewing of a symmetric zero-mean density."""

    def __init__(self, base, eta):
        self.base = base  # StandardizedDensity, symmetric, mean 0 var 1
        self.eta = eta
        self.logc = math.log(2.0 / (eta + 1.0 / eta))

    def logpdf(self, x):
        x = np.asarray(x, dtype=float)
        scaled = np.where(x >= 0.0, x / self.eta, x * self.eta)
        return self.logc + self.base.log_pdf(scaled)

    def rvs(self, n, rng):
        absz = np.abs(self.base._raw_rvs(n, rng) - self.base.mean) / self.base.sd
        pos = rng.random(n) < self.eta**2 / (1.0 + self.eta**2)
        return np.where(pos, absz * self.eta, -absz / self.eta)

    def mean_sd(self):
        eta = self.eta
        m1 = self.base.abs_moment()
        mean = m1 * (eta - 1.0 / eta)
        second = (eta**3 + eta**-3) / (eta + 1.0 / eta)  # E[base^2] = 1
        return mean, math.sqrt(second - mean * mean)


def _build_raw(spec):
    fam, shape = spec.family, spec.shape
    if fam in ("norm", "snorm"):
        return _ScipyRaw(stats.norm())
    if fam in ("std", "sstd"):
        return _ScipyRaw(stats.t(shape[0]))
    if fam in ("ged", "sged"):
        return _ScipyRaw(stats.gennorm(shape[0]))
    if fam == "nig":
        return _ScipyRaw(stats.norminvgauss(shape[0], shape[1]))
    if fam == "ghyp":
        return _ScipyRaw(stats.genhyperbolic(shape[0], shape[1], shape[2]))
    if fam == "jsu":
        return _ScipyRaw(stats.johnsonsu(shape[0], shape[1]))
    if fam == "ald":
        return _ScipyRaw(stats.laplace_asymmetric(shape[0]))
    if fam == "ghst":
        return _GhSkewT(shape[0], shape[1])
    if fam == "ast":
        return _Ast(shape[0], shape[1], shape[2])
    if fam == "ast1":
        return _Ast(shape[0], shape[0], shape[1])
    raise ValueError(fam)


class StandardizedDensity:
    """A zero-mean unit-variance innovation density.

    Construction computes (and caches) the affine standardization of the
    underlying raw family; `log_pdf` and `sample` are vectorized.
    """

    def __init__(self, spec, _raw=None):
        if isinstance(spec, str):
            spec = InnovationSpec(spec)
        self.spec = spec
        raw = _raw if _raw is not None else _build_raw(spec)
        if _raw is None and spec.skew != 1.0:
            if spec.family not in _FS_FAMILIES:
                raise ValueError(
                    f"FS skew parameter not supported for family {spec.family!r}; "
                    "use the family's own asymmetry parameter"
                )
            base = StandardizedDensity(
                InnovationSpec(spec.family, spec.shape, 1.0), _raw=raw
            )
            raw = _FsSkewed(base, spec.skew)
        self._raw = raw
        m, s = raw.mean_sd()
        if m is None:
            m, s = self._quadrature_moments()
        self.mean = m
        self.sd = s
        self.log_norm_const = math.log(s)  # jacobian of the standardization
        self._abs_moment = None

    # -- helpers -----------------------------------------------------------

    def _quadrature_moments(self):
        pdf = lambda x: np.exp(self._raw.logpdf(x))
        m = _quad(lambda x: x * pdf(x))
        v = _quad(lambda x: (x - m) ** 2 * pdf(x))
        return m, math.sqrt(v)

    def _raw_rvs(self, n, rng):
        return self._raw.rvs(n, rng)

    def abs_moment(self):
        """E|Z| of the standardized variable (cached; used by FS skewing)."""
        if self._abs_moment is None:
            self._abs_moment = _quad(lambda z: np.abs(z) * np.exp(self.log_pdf(z)))
        return self._abs_moment

    def support_bound(self, tail_mass_log=-32.24):
        """|z| beyond which log pdf < tail_mass_log (default ~1e-14)."""
        hi = 1.0
        while (
            max(self.log_pdf(np.array([hi]))[0], self.log_pdf(np.array([-hi]))[0])
            > tail_mass_log
            and hi < 1e8
        ):
            hi *= 2.0
        return hi

    # -- public surface ----------------------------------------------------

    def log_pdf(self, z):
        """Natural-log density of the standardized variable at z."""
        z = np.asarray(z, dtype=float)
        if np.any(~np.isfinite(z)):
            raise ValueError("log_pdf requires finite input")
        return self._raw.logpdf(self.mean + self.sd * z) + self.log_norm_const

    def pdf(self, z):
        return np.exp(self.log_pdf(z))

    def sample(self, n, seed=None, rng=None):
        """n i.i.d. standardized draws; deterministic given seed."""
        if n < 1:
            raise ValueError("n must be >= 1")
        if rng is None:
            rng = np.random.default_rng(seed)
        return (self._raw.rvs(int(n), rng) - self.mean) / self.sd


def _quad(f, lo=-np.inf, hi=np.inf):
    val, _ = integrate.quad(f, lo, hi, limit=200)
    return val


def make_density(spec):
    """Build a StandardizedDensity from an InnovationSpec (or family token)."""
    return StandardizedDensity(spec)


def fs_skew(base, eta):
    """Fernandez-Steel skewing of a symmetric standardized density.

    Returns a new StandardizedDensity, re-centered and re-scaled to mean 0
    and variance 1.  eta < 1 puts mass on the left tail, eta > 1 on the
    right; eta = 1 returns the base unchanged.
    """
    if eta <= 0:
        raise ValueError("eta must be > 0")
    if isinstance(base, str):
        base = StandardizedDensity(base)
    if eta == 1.0:
        return base
    spec = InnovationSpec(base.spec.family, base.spec.shape, eta)
    out = StandardizedDensity.__new__(StandardizedDensity)
    out.spec = spec
    out._raw = _FsSkewed(base, eta)
    m, s = out._raw.mean_sd()
    out.mean, out.sd = m, s
    out.log_norm_const = math.log(s)
    out._abs_moment = None
    return out


# ---------------------------------------------------------------------------
# Scores of the observation density r = mu + exp(lam) * z
# ---------------------------------------------------------------------------

_SCORE_WHICH = ("location", "log-scale", "shape")


def obs_log_pdf(d, r, mu=0.0, lam=0.0):
    """Log density of r under r = mu + exp(lam) z with z ~ d."""
    z = (np.asarray(r, dtype=float) - mu) * math.exp(-lam)
    return d.log_pdf(z) - lam


def score_wrt(d, z, which, mu=0.0, lam=0.0, step=None):
    """Partial derivative of the observation log-density at standardized
    residual z with respect to `which` in {location, log-scale, shape}.

    Analytic for Normal and Student's t location/log-scale scores; central
    finite differences otherwise.  `z` is the residual already standardized
    by (r - mu) * exp(-lam); the returned derivative is with respect to the
    named parameter of the observation density evaluated at that point.
    """
    if which not in _SCORE_WHICH:
        raise ValueError(f"which must be one of {_SCORE_WHICH}")
    z = np.asarray(z, dtype=float)
    if np.any(~np.isfinite(z)):
        raise ValueError("score requires finite residuals")
    lp = d.log_pdf(z)
    if np.any(~np.isfinite(lp)):
        raise ValueError("non-finite density at z")

    fam = d.spec.family
    sigma = math.exp(lam)
    if fam == "norm" and d.spec.skew == 1.0:
        if which == "location":
            return z / sigma
        if which == "log-scale":
            return z * z - 1.0
    if fam == "std" and d.spec.skew == 1.0:
        nu = d.spec.shape[0]
        s2 = nu / (nu - 2.0)
        x2 = s2 * z * z
        if which == "location":
            return (nu + 1.0) * s2 * z / (nu + x2) / sigma
        if which == "log-scale":
            return (nu + 1.0) * x2 / (nu + x2) - 1.0

    r = mu + sigma * z
    if which == "shape":
        if not d.spec.shape:
            raise ValueError(f"family {fam!r} has no shape parameter")
        theta = d.spec.shape[0]
        h = step if step is not None else 1e-6 * max(1.0, abs(theta))
        d_hi = StandardizedDensity(
            InnovationSpec(fam, (theta + h,) + d.spec.shape[1:], d.spec.skew)
        )
        d_lo = StandardizedDensity(
            InnovationSpec(fam, (theta - h,) + d.spec.shape[1:], d.spec.skew)
        )
        return (obs_log_pdf(d_hi, r, mu, lam) - obs_log_pdf(d_lo, r, mu, lam)) / (2 * h)
    if which == "location":
        h = step if step is not None else 1e-6 * max(1.0, abs(mu))
        return (obs_log_pdf(d, r, mu + h, lam) - obs_log_pdf(d, r, mu - h, lam)) / (2 * h)
    h = step if step is not None else 1e-6 * max(1.0, abs(lam))
    return (obs_log_pdf(d, r, mu, lam + h) - obs_log_pdf(d, r, mu, lam - h)) / (2 * h)
