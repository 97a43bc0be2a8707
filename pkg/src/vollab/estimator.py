"""Maximum-likelihood fitting for every model module.

Optimization happens in an unconstrained space: each model declares a
bijective transform from its feasible region onto R^k (log maps for
positives, scaled logistics for intervals, an ordered construction for
couplings like alpha+beta < rho).  The search runs a derivative-free
simplex to a loose tolerance and then polishes with a quasi-Newton step
using numeric gradients.  Standard errors come from the QMLE sandwich
H^-1 S H^-1 (numeric Hessian, outer product of per-observation score
contributions), computed in the transformed space and mapped back to the
natural coordinates with the delta method.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from . import beta_egarch, gas, innovations
from ._recursions import (
    cgarch_filter,
    fgarch_filter,
    gas_filter_kernel,
    tgarch_filter,
)

PENALTY = 1e10
MIN_OBS_DEFAULT = 250


# ---------------------------------------------------------------------------
# Transform blocks: bijections between natural parameter dicts and R^k
# ---------------------------------------------------------------------------


def _expit(u):
    return 1.0 / (1.0 + math.exp(-u))


def _logit(x):
    return math.log(x / (1.0 - x))


class _Block:
    """Maps a handful of named natural parameters to unconstrained reals."""

    names = ()

    def to_u(self, params):  # dict -> list of reals
        raise NotImplementedError

    def to_nat(self, u):  # list of reals -> dict
        raise NotImplementedError


class Ident(_Block):
    def __init__(self, name):
        self.names = (name,)

    def to_u(self, params):
        return [params[self.names[0]]]

    def to_nat(self, u):
        return {self.names[0]: u[0]}


class Log(_Block):
    """Positive parameter via x = exp(u)."""

    def __init__(self, name, floor=0.0):
        self.names = (name,)
        self.floor = floor

    def to_u(self, params):
        return [math.log(params[self.names[0]] - self.floor)]

    def to_nat(self, u):
        return {self.names[0]: self.floor + math.exp(min(u[0], 50.0))}


class Interval(_Block):
    """x in (lo, hi) via a scaled logistic."""

    def __init__(self, name, lo, hi):
        self.names = (name,)
        self.lo, self.hi = lo, hi

    def to_u(self, params):
        return [_logit((params[self.names[0]] - self.lo) / (self.hi - self.lo))]

    def to_nat(self, u):
        return {self.names[0]: self.lo + (self.hi - self.lo) * _expit(u[0])}


class PosGap(_Block):
    """(a, b) with a > |b| + gap: b free, a = |b| + gap + exp(u)."""

    def __init__(self, name_a, name_b, gap=1e-6):
        self.names = (name_a, name_b)
        self.gap = gap

    def to_u(self, params):
        a, b = params[self.names[0]], params[self.names[1]]
        return [math.log(a - abs(b) - self.gap), b]

    def to_nat(self, u):
        b = u[1]
        return {self.names[0]: abs(b) + self.gap + math.exp(min(u[0], 50.0)),
                self.names[1]: b}


class OrderedCgarch(_Block):
    """rho in (0,1), alpha+beta in (0, rho), alpha/beta split in (0,1)."""

    names = ("rho", "alpha", "beta")

    def to_u(self, params):
        rho = params["rho"]
        s = params["alpha"] + params["beta"]
        w = params["alpha"] / s if s > 0 else 0.5
        return [_logit(rho), _logit(s / rho), _logit(min(max(w, 1e-12), 1 - 1e-12))]

    def to_nat(self, u):
        rho = _expit(u[0])
        s = rho * _expit(u[1])
        w = _expit(u[2])
        return {"rho": rho, "alpha": s * w, "beta": s * (1.0 - w)}


class GasAB(_Block):
    """0 < a < b < 1 for the variance-link GAS coordinate."""

    def __init__(self, name_a, name_b):
        self.names = (name_a, name_b)

    def to_u(self, params):
        a, b = params[self.names[0]], params[self.names[1]]
        return [_logit(a / b), _logit(b)]

    def to_nat(self, u):
        b = _expit(u[1])
        return {self.names[0]: b * _expit(u[0]), self.names[1]: b}


class OrderedPhis(_Block):
    """0 < phi2 < phi1 < 1, keeping the long-run component labeled first."""

    names = ("phi1", "phi2")

    def to_u(self, params):
        p1, p2 = params["phi1"], params["phi2"]
        return [_logit(p1), _logit(p2 / p1)]

    def to_nat(self, u):
        p1 = _expit(u[0])
        return {"phi1": p1, "phi2": p1 * _expit(u[1])}


class TgarchLev(_Block):
    """alpha > 0 and alpha + gamma_lev > 0 via two log maps."""

    names = ("alpha", "gamma_lev")

    def to_u(self, params):
        a = params["alpha"]
        return [math.log(a), math.log(a + params["gamma_lev"])]

    def to_nat(self, u):
        a = math.exp(min(u[0], 50.0))
        return {"alpha": a, "gamma_lev": math.exp(min(u[1], 50.0)) - a}


class VectorTransform:
    """Ordered collection of blocks forming one bijection dict <-> R^k."""

    def __init__(self, blocks):
        self.blocks = list(blocks)
        self.names = tuple(n for b in self.blocks for n in b.names)

    @property
    def dim(self):
        return len(self.names)

    def to_u(self, params):
        out = []
        for b in self.blocks:
            out.extend(b.to_u(params))
        return np.asarray(out, dtype=float)

    def to_nat(self, u):
        out = {}
        i = 0
        for b in self.blocks:
            k = len(b.names)
            out.update(b.to_nat(list(u[i:i + k])))
            i += k
        return out

    def jacobian(self, u, step=1e-6):
        """d(natural)/d(u) by central differences."""
        k = self.dim
        J = np.empty((k, k))
        for j in range(k):
            h = step * max(1.0, abs(u[j]))
            up, um = u.copy(), u.copy()
            up[j] += h
            um[j] -= h
            tp = self.to_nat(up)
            tm = self.to_nat(um)
            for i, name in enumerate(self.names):
                J[i, j] = (tp[name] - tm[name]) / (2.0 * h)
        return J


# ---------------------------------------------------------------------------
# Innovation shape parameter metadata
# ---------------------------------------------------------------------------

_NU = (innovations.NU_MIN, innovations.NU_MAX)

# per family: ordered (parameter name, block factory) entries
_SHAPE_BLOCKS = {
    "norm": [],
    "snorm": [],
    "std": [("nu", lambda: Interval("nu", *_NU))],
    "sstd": [("nu", lambda: Interval("nu", *_NU))],
    "ged": [("shape", lambda: Interval("shape", innovations.GED_MIN,
                                       innovations.GED_MAX))],
    "sged": [("shape", lambda: Interval("shape", innovations.GED_MIN,
                                        innovations.GED_MAX))],
    "nig": [("nig_ab", lambda: PosGap("nig_a", "nig_b"))],
    "ghyp": [("ghyp_lam", lambda: Ident("ghyp_lam")),
             ("ghyp_ab", lambda: PosGap("ghyp_a", "ghyp_b"))],
    "ghst": [("nu", lambda: Interval("nu", 4.05, innovations.NU_MAX)),
             ("ghst_beta", lambda: Ident("ghst_beta"))],
    "jsu": [("jsu_a", lambda: Ident("jsu_a")), ("jsu_b", lambda: Log("jsu_b"))],
    "ast": [("nu1", lambda: Interval("nu1", 2.02, innovations.NU_MAX)),
            ("nu2", lambda: Interval("nu2", 2.02, innovations.NU_MAX)),
            ("ast_alpha", lambda: Interval("ast_alpha", 1e-4, 1 - 1e-4))],
    "ast1": [("nu", lambda: Interval("nu", 2.02, innovations.NU_MAX)),
             ("ast_alpha", lambda: Interval("ast_alpha", 1e-4, 1 - 1e-4))],
    "ald": [("shape", lambda: Log("shape"))],
}

_SHAPE_NAMES = {
    "norm": [], "snorm": [], "std": ["nu"], "sstd": ["nu"],
    "ged": ["shape"], "sged": ["shape"], "nig": ["nig_a", "nig_b"],
    "ghyp": ["ghyp_lam", "ghyp_a", "ghyp_b"], "ghst": ["nu", "ghst_beta"],
    "jsu": ["jsu_a", "jsu_b"], "ast": ["nu1", "nu2", "ast_alpha"],
    "ast1": ["nu", "ast_alpha"], "ald": ["shape"],
}

_SHAPE_STARTS = {
    "norm": {}, "snorm": {}, "std": {"nu": 8.0}, "sstd": {"nu": 8.0},
    "ged": {"shape": 1.5}, "sged": {"shape": 1.5},
    "nig": {"nig_a": 2.0, "nig_b": 0.0},
    "ghyp": {"ghyp_lam": -0.5, "ghyp_a": 2.0, "ghyp_b": 0.0},
    "ghst": {"nu": 8.0, "ghst_beta": -0.1},
    "jsu": {"jsu_a": 0.0, "jsu_b": 2.0},
    "ast": {"nu1": 8.0, "nu2": 8.0, "ast_alpha": 0.5},
    "ast1": {"nu": 8.0, "ast_alpha": 0.5},
    "ald": {"shape": 1.0},
}

_FS_FAMILIES = {"norm", "snorm", "std", "sstd", "ged", "sged"}


def _shape_values(family, params):
    return tuple(params[n] for n in _SHAPE_NAMES[family])


class _FastBase:
    def support_bound(self, tail_mass_log=-32.24):
        hi = 1.0
        while (self.log_pdf(np.array([hi, -hi])).max() > tail_mass_log
               and hi < 1e8):
            hi *= 2.0
        return hi


class _FastNorm(_FastBase):
    """Closed-form standardized Gaussian log-density (hot-path shortcut)."""

    _C = -0.5 * math.log(2.0 * math.pi)

    def log_pdf(self, z):
        return self._C - 0.5 * z * z


class _FastStd(_FastBase):
    """Closed-form standardized Student-t log-density."""

    def __init__(self, nu):
        if not innovations.NU_MIN < nu <= innovations.NU_MAX:
            raise ValueError("nu out of bounds")
        from scipy.special import gammaln
        self.nu = nu
        self._c = (gammaln((nu + 1.0) / 2.0) - gammaln(nu / 2.0)
                   - 0.5 * math.log(math.pi * (nu - 2.0)))

    def log_pdf(self, z):
        return self._c - (self.nu + 1.0) / 2.0 * np.log1p(z * z / (self.nu - 2.0))


class _FastGed(_FastBase):
    """Closed-form standardized generalized-error log-density."""

    def __init__(self, kappa):
        if not innovations.GED_MIN < kappa <= innovations.GED_MAX:
            raise ValueError("GED exponent out of bounds")
        from scipy.special import gammaln
        self.kappa = kappa
        # lam scales the raw GED to unit variance
        self.lam = math.exp(0.5 * (gammaln(1.0 / kappa) - gammaln(3.0 / kappa)))
        self._c = (math.log(kappa) - math.log(2.0 * self.lam)
                   - gammaln(1.0 / kappa))

    def log_pdf(self, z):
        return self._c - np.abs(z / self.lam) ** self.kappa


def _make_density(family, params, skewed):
    skew = params.get("eta", 1.0) if skewed else 1.0
    if skew == 1.0:
        if family == "norm":
            return _FastNorm()
        if family == "std":
            return _FastStd(params["nu"])
        if family == "ged":
            return _FastGed(params["shape"])
    return innovations.StandardizedDensity(
        innovations.InnovationSpec(family, _shape_values(family, params), skew))


def _slow_density(family, params, skewed):
    """Full StandardizedDensity, for handing to the model modules."""
    skew = params.get("eta", 1.0) if skewed else 1.0
    return innovations.StandardizedDensity(
        innovations.InnovationSpec(family, _shape_values(family, params), skew))


# ---------------------------------------------------------------------------
# Model specification and adapters
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ModelSpec:
    """What to fit: model name, innovation family, and structural options.

    `fix` removes parameters from the search, pinning them at the given
    values (e.g. {"nu": 4.1}).
    """

    model: str
    family: str = "norm"
    fs_skew: bool = False
    free_gamma: bool = False
    free_zeta: bool = False
    components: int = 1
    scaling_power: float = 0.0
    link: str = "log"
    include_location: bool = True
    score_clip: float = None  # None: module default (gas.SCORE_CLIP)
    fix: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.model not in _ADAPTERS:
            raise ValueError(f"unknown model {self.model!r}")
        if self.family not in innovations.FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.fs_skew and self.family not in _FS_FAMILIES:
            raise ValueError(f"FS skew not supported for family {self.family!r}")
        if self.link not in ("log", "variance"):
            raise ValueError("link must be 'log' or 'variance'")
        if self.link == "variance" and self.family != "norm":
            raise ValueError("the variance link is defined for the Normal family only")


class _Adapter:
    """Per-model estimation hooks."""

    def blocks(self, spec):
        raise NotImplementedError

    def start(self, spec, data):
        raise NotImplementedError

    def loglik_obs(self, spec, params, data):
        """Vector of per-observation log-likelihood contributions."""
        raise NotImplementedError

    def filtered_path(self, spec, params, data):
        return None

    def _shape_skew_blocks(self, spec):
        out = [f() for _, f in _SHAPE_BLOCKS[spec.family]]
        if spec.fs_skew:
            out.append(Log("eta"))
        return out

    def _shape_skew_start(self, spec):
        out = dict(_SHAPE_STARTS[spec.family])
        if spec.fs_skew:
            out["eta"] = 1.0
        return out


# 2000-node Gauss-Legendre cache used for the cheap shock-expectation
# evaluation inside the objective (the exact adaptive version lives in
# the fgarch module and is used for reported quantities).
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(2000)


def _rho_fast(d, zeta1, zeta2, delta):
    if zeta1 == 0.0 and zeta2 == 0.0 and delta == 2.0:
        return 1.0
    B = d.support_bound()
    z = _GL_NODES * B
    w = _GL_WEIGHTS * B
    u = z - zeta2
    g = (np.abs(u) - zeta1 * u) ** delta
    return float(np.sum(g * np.exp(d.log_pdf(z)) * w))


class _GarchAdapter(_Adapter):
    """Plain GARCH(1,1) and the full fGARCH(1,1) family recursion."""

    def __init__(self, full):
        self.full = full

    def blocks(self, spec):
        out = [Log("omega"), Log("alpha"), Log("beta")]
        if self.full and spec.free_zeta:
            out += [Interval("zeta1", -1 + 1e-6, 1 - 1e-6), Ident("zeta2")]
        if self.full and spec.free_gamma:
            out.append(Log("gamma"))
        out += self._shape_skew_blocks(spec)
        return out

    def start(self, spec, data):
        v = float(np.var(data))
        out = {"omega": v * 0.1, "alpha": 0.05, "beta": 0.85}
        if self.full and spec.free_zeta:
            out.update(zeta1=0.0, zeta2=0.0)
        if self.full and spec.free_gamma:
            out["gamma"] = 2.0
        out.update(self._shape_skew_start(spec))
        return out

    def _coords(self, spec, params):
        gamma = params.get("gamma", spec.fix.get("gamma", 2.0))
        z1 = params.get("zeta1", spec.fix.get("zeta1", 0.0))
        z2 = params.get("zeta2", spec.fix.get("zeta2", 0.0))
        return gamma, z1, z2

    def loglik_obs(self, spec, params, data):
        d = _make_density(spec.family, params, spec.fs_skew)
        gamma, z1, z2 = self._coords(spec, params)
        rho = _rho_fast(d, z1, z2, gamma)
        P = params["beta"] + params["alpha"] * rho
        sg0 = params["omega"] / (1.0 - min(P, 0.999))
        sg, flag = fgarch_filter(
            data, params["omega"], np.array([params["alpha"]]),
            np.array([params["beta"]]), gamma, np.array([z1]),
            np.array([z2]), sg0)
        if flag:
            raise ArithmeticError("variance recursion failed")
        sigma = sg ** (1.0 / gamma)
        return d.log_pdf(data / sigma) - np.log(sigma)

    def filtered_path(self, spec, params, data):
        from . import fgarch as fg
        gamma, z1, z2 = self._coords(spec, params)
        d = _slow_density(spec.family, params, spec.fs_skew)
        p = fg.FGarchParams(params["omega"], (params["alpha"],),
                            (params["beta"],), gamma, (z1,), (z2,), d)
        return fg.filter(data, p)


class _TgarchAdapter(_Adapter):
    def blocks(self, spec):
        return [Log("omega"), TgarchLev(), Log("beta")] + self._shape_skew_blocks(spec)

    def start(self, spec, data):
        out = {"omega": float(np.var(data)) * 0.1, "alpha": 0.05,
               "gamma_lev": 0.05, "beta": 0.85}
        out.update(self._shape_skew_start(spec))
        return out

    def loglik_obs(self, spec, params, data):
        d = _make_density(spec.family, params, spec.fs_skew)
        s20 = float(np.var(data))
        s2, flag = tgarch_filter(data, params["omega"], params["alpha"],
                                 params["beta"], params["gamma_lev"], s20)
        if flag:
            raise ArithmeticError("variance recursion failed")
        sigma = np.sqrt(s2)
        return d.log_pdf(data / sigma) - np.log(sigma)

    def filtered_path(self, spec, params, data):
        from . import fgarch as fg
        d = _slow_density(spec.family, params, spec.fs_skew)
        p = fg.TGarchParams(params["omega"], params["alpha"], params["beta"],
                            params["gamma_lev"], d)
        return fg.filter_tgarch(data, p)


class _CgarchAdapter(_Adapter):
    def blocks(self, spec):
        return ([Log("omega"), OrderedCgarch(), Interval("phi", 1e-8, 1 - 1e-8)]
                + self._shape_skew_blocks(spec))

    def start(self, spec, data):
        out = {"omega": float(np.var(data)), "rho": 0.99, "alpha": 0.05,
               "beta": 0.85, "phi": 0.05}
        out.update(self._shape_skew_start(spec))
        return out

    def loglik_obs(self, spec, params, data):
        d = _make_density(spec.family, params, spec.fs_skew)
        s2, _, flag = cgarch_filter(data, params["omega"], params["rho"],
                                    params["phi"], params["alpha"],
                                    params["beta"], params["omega"],
                                    params["omega"])
        if flag:
            raise ArithmeticError("variance recursion failed")
        sigma = np.sqrt(s2)
        return d.log_pdf(data / sigma) - np.log(sigma)

    def filtered_path(self, spec, params, data):
        from . import cgarch as cg
        d = _slow_density(spec.family, params, spec.fs_skew)
        p = cg.CGarchParams(params["omega"], params["rho"], params["phi"],
                            params["alpha"], params["beta"], d)
        return cg.filter_components(data, p)


class _GasAdapter(_Adapter):
    def blocks(self, spec):
        if spec.link == "variance":
            out = []
            if spec.include_location:
                out.append(Ident("mu"))
            out += [Log("kappa_sigma"), GasAB("a_sigma", "b_sigma")]
            return out
        out = []
        if spec.include_location:
            out += [Ident("kappa_mu"), Log("a_mu"),
                    Interval("b_mu", 1e-6, 1 - 1e-6)]
        out += [Ident("kappa_sigma"), Log("a_sigma"),
                Interval("b_sigma", 1e-6, 1 - 1e-6)]
        out += self._shape_skew_blocks(spec)
        return out

    def start(self, spec, data):
        m = float(np.mean(data))
        sd = float(np.std(data))
        if spec.link == "variance":
            out = {"kappa_sigma": sd * sd * 0.05, "a_sigma": 0.05,
                   "b_sigma": 0.95}
            if spec.include_location:
                out["mu"] = m
            return out
        out = {"kappa_sigma": 0.05 * math.log(max(sd, 1e-8)), "a_sigma": 0.05,
               "b_sigma": 0.95}
        if spec.include_location:
            out.update(kappa_mu=0.1 * m, a_mu=0.01, b_mu=0.9)
        out.update(self._shape_skew_start(spec))
        return out

    def _params_obj(self, spec, params):
        if spec.include_location:
            kappa = (params["kappa_mu"], params["kappa_sigma"])
            a = (params["a_mu"], params["a_sigma"])
            b = (params["b_mu"], params["b_sigma"])
        else:
            kappa = (0.0, params["kappa_sigma"])
            a = (0.0, params["a_sigma"])
            b = (0.5, params["b_sigma"])
        d = _slow_density(spec.family, params, spec.fs_skew)
        clip = spec.score_clip if spec.score_clip is not None else gas.SCORE_CLIP
        return gas.GasParams(kappa, a, b, d, spec.scaling_power, clip)

    def loglik_obs(self, spec, params, data):
        if spec.link == "variance":
            mu = params.get("mu", 0.0)
            s2 = gas.filter_variance_link(data, mu, params["kappa_sigma"],
                                          params["a_sigma"], params["b_sigma"])
            e = data - mu
            return -0.5 * (math.log(2.0 * math.pi) + np.log(s2) + e * e / s2)
        if spec.family in ("norm", "std") and not spec.fs_skew:
            # call the compiled filter directly; skip GasParams plumbing
            if spec.include_location:
                kappa = np.array([params["kappa_mu"], params["kappa_sigma"]])
                a = np.array([params["a_mu"], params["a_sigma"]])
                b = np.array([params["b_mu"], params["b_sigma"]])
            else:
                kappa = np.array([0.0, params["kappa_sigma"]])
                a = np.array([0.0, params["a_sigma"]])
                b = np.array([0.5, params["b_sigma"]])
            theta0 = kappa / (1.0 - b)
            is_t = spec.family == "std"
            nu = params.get("nu", 0.0)
            clip = spec.score_clip if spec.score_clip is not None else gas.SCORE_CLIP
            theta, _, flag = gas_filter_kernel(
                data, kappa, a, b, nu, is_t, spec.scaling_power, theta0,
                clip)
            if flag:
                raise ArithmeticError("non-finite score in the filter")
            d = _make_density(spec.family, params, False)
            z = (data - theta[:, 0]) * np.exp(-theta[:, 1])
            return d.log_pdf(z) - theta[:, 1]
        p = self._params_obj(spec, params)
        path = gas.gas_filter(data, p)
        z = (data - path.theta[:, 0]) * np.exp(-path.theta[:, 1])
        return p.innovation.log_pdf(z) - path.theta[:, 1]

    def filtered_path(self, spec, params, data):
        if spec.link == "variance":
            return None
        return gas.gas_filter(data, self._params_obj(spec, params))


class _BetaEgarchAdapter(_Adapter):
    def blocks(self, spec):
        if spec.components == 1:
            out = [Ident("omega"), Interval("phi1", 1e-6, 1 - 1e-6),
                   Ident("kappa1"), Ident("kappa_star")]
        else:
            out = [Ident("omega"), OrderedPhis(), Ident("kappa1"),
                   Ident("kappa2"), Ident("kappa_star")]
        out += [Interval("nu", innovations.NU_MIN, innovations.NU_MAX),
                Log("eta")]
        return out

    def start(self, spec, data):
        sd = float(np.std(data))
        out = {"omega": math.log(max(sd, 1e-8)), "phi1": 0.95,
               "kappa1": 0.05, "kappa_star": 0.01, "nu": 8.0, "eta": 1.0}
        if spec.components == 2:
            out.update(phi1=0.98, phi2=0.90, kappa2=0.05)
        return out

    def _params_obj(self, spec, params):
        return beta_egarch.BetaEgarchParams(
            omega=params["omega"], phi1=params["phi1"],
            kappa1=params["kappa1"], kappa_star=params["kappa_star"],
            nu=params["nu"], eta=params["eta"], components=spec.components,
            phi2=params.get("phi2", 0.0), kappa2=params.get("kappa2", 0.0))

    def loglik_obs(self, spec, params, data):
        p = self._params_obj(spec, params)
        if spec.components == 1:
            path = beta_egarch.filter_one(data, p)
        else:
            path = beta_egarch.filter_two(data, p)
        return beta_egarch.log_pdf(data, path.lam, p.nu, p.eta)

    def filtered_path(self, spec, params, data):
        p = self._params_obj(spec, params)
        if spec.components == 1:
            return beta_egarch.filter_one(data, p)
        return beta_egarch.filter_two(data, p)


_ADAPTERS = {
    "garch": _GarchAdapter(full=False),
    "fgarch": _GarchAdapter(full=True),
    "tgarch": _TgarchAdapter(),
    "cgarch": _CgarchAdapter(),
    "gas": _GasAdapter(),
    "betaegarch": _BetaEgarchAdapter(),
}


# ---------------------------------------------------------------------------
# Fit machinery
# ---------------------------------------------------------------------------


@dataclass
class FitResult:
    """Estimates with sandwich standard errors and fit statistics."""

    model: str
    params: dict
    se_plain: dict
    se_robust: dict
    loglik: float
    criteria: dict
    convergence: dict
    path: object
    n_obs: int
    spec: ModelSpec = None

    def estimand(self, target):
        """Named readout, e.g. 'alpha+beta' or any parameter name."""
        if target in self.params:
            return self.params[target]
        if "+" in target:
            return sum(self.params[t.strip()] for t in target.split("+"))
        raise KeyError(f"unknown estimand {target!r}")

    def robust_se_of(self, target):
        if target in self.se_robust:
            return self.se_robust[target]
        if target == "alpha+beta":
            # se of the sum needs the covariance; stored when computed
            return self.se_robust.get("alpha+beta")
        raise KeyError(f"no robust SE for {target!r}")


def info_criteria(loglik, n_params, n_obs):
    """Per-observation information criteria."""
    L, p, N = float(loglik), int(n_params), int(n_obs)
    base = -2.0 * L / N
    return {
        "AIC": base + 2.0 * p / N,
        "BIC": base + p * math.log(N) / N,
        "SIC": base + math.log((N + 2.0 * p) / N),
        "HQIC": base + 2.0 * p * math.log(math.log(N)) / N,
    }


def _transform_for(spec):
    adapter = _ADAPTERS[spec.model]
    blocks = [b for b in adapter.blocks(spec)
              if not all(n in spec.fix for n in b.names)]
    for b in adapter.blocks(spec):
        fixed = [n in spec.fix for n in b.names]
        if any(fixed) and not all(fixed):
            raise ValueError(
                f"parameters {b.names} must be fixed together or not at all")
    return VectorTransform(blocks)


def _full_params(spec, params):
    out = dict(spec.fix)
    out.update(params)
    return out


def fit(spec: ModelSpec, data, seed=0, n_starts=5, min_obs=MIN_OBS_DEFAULT,
        compute_se=True):
    """Maximum-likelihood fit of `spec` to a residual/return vector.

    Deterministic given (spec, data, seed).  Runs `n_starts` jittered
    starting points through a Nelder-Mead stage and polishes the best with
    L-BFGS-B on numeric gradients.
    """
    x = data.values if hasattr(data, "values") else np.asarray(data, dtype=float)
    if x.shape[0] < min_obs:
        raise ValueError(f"need at least {min_obs} observations, got {x.shape[0]}")
    adapter = _ADAPTERS[spec.model]
    tf = _transform_for(spec)
    n = x.shape[0]

    def negloglik(u):
        try:
            params = _full_params(spec, tf.to_nat(u))
            ll = adapter.loglik_obs(spec, params, x)
        except (ArithmeticError, ValueError, FloatingPointError, OverflowError):
            return PENALTY
        total = float(np.sum(ll))
        if not math.isfinite(total):
            return PENALTY
        return -total

    start = {k: v for k, v in adapter.start(spec, x).items()
             if k not in spec.fix}
    u0 = tf.to_u(start)
    rng = np.random.default_rng(seed)
    best = None
    for s in range(int(n_starts)):
        u_init = u0 if s == 0 else u0 + 0.1 * rng.standard_normal(tf.dim)
        res = optimize.minimize(
            negloglik, u_init, method="Nelder-Mead",
            options={"maxiter": 400 * tf.dim, "xatol": 1e-5, "fatol": 1e-7})
        # restart once from the found point; a fresh simplex escapes the
        # degenerate-simplex stalls the first pass can end in
        res = optimize.minimize(
            negloglik, res.x, method="Nelder-Mead",
            options={"maxiter": 200 * tf.dim, "xatol": 1e-6, "fatol": 1e-9})
        if best is None or res.fun < best[0]:
            best = (res.fun, res.x, s)
    polish = optimize.minimize(
        negloglik, best[1], method="L-BFGS-B", jac="3-point",
        options={"ftol": 1e-12, "gtol": 1e-7, "maxiter": 500})
    u_hat = polish.x if polish.fun <= best[0] else best[1]
    nll_hat = min(polish.fun, best[0])
    converged = bool(nll_hat < PENALTY / 2) and (polish.success or polish.fun <= best[0])
    grad_norm = float(np.max(np.abs(polish.jac))) if hasattr(polish, "jac") else float("nan")

    params = _full_params(spec, tf.to_nat(u_hat))
    loglik = -nll_hat
    se_plain = {}
    se_robust = {}
    if compute_se and converged:
        try:
            se_plain, se_robust = _sandwich(spec, adapter, tf, u_hat, x)
        except (ArithmeticError, np.linalg.LinAlgError):
            se_plain, se_robust = {}, {}
    try:
        path = adapter.filtered_path(spec, params, x)
    except (ArithmeticError, ValueError):
        path = None
    return FitResult(
        model=spec.model, params=params, se_plain=se_plain,
        se_robust=se_robust, loglik=loglik,
        criteria=info_criteria(loglik, tf.dim, n),
        convergence={"converged": converged,
                     "iterations": int(polish.nit) + 1,
                     "grad_norm": grad_norm,
                     "start_index": int(best[2])},
        path=path, n_obs=n, spec=spec)


def _per_obs_scores(spec, adapter, tf, u, x):
    """Per-observation score contributions w.r.t. u, by central FD."""
    k = tf.dim
    G = np.empty((x.shape[0], k))
    for j in range(k):
        h = 1e-5 * max(1.0, abs(u[j]))
        up, um = u.copy(), u.copy()
        up[j] += h
        um[j] -= h
        lp = adapter.loglik_obs(spec, _full_params(spec, tf.to_nat(up)), x)
        lm = adapter.loglik_obs(spec, _full_params(spec, tf.to_nat(um)), x)
        G[:, j] = (lp - lm) / (2.0 * h)
    return G


def _hessian(spec, adapter, tf, u, x):
    """Hessian of the total log-likelihood w.r.t. u (central differences)."""
    k = tf.dim

    def total(v):
        return float(np.sum(adapter.loglik_obs(
            spec, _full_params(spec, tf.to_nat(v)), x)))

    H = np.empty((k, k))
    h = np.array([1e-4 * max(1.0, abs(u[j])) for j in range(k)])
    f0 = total(u)
    fp = np.empty(k)
    fm = np.empty(k)
    for j in range(k):
        up, um = u.copy(), u.copy()
        up[j] += h[j]
        um[j] -= h[j]
        fp[j] = total(up)
        fm[j] = total(um)
        H[j, j] = (fp[j] - 2.0 * f0 + fm[j]) / h[j] ** 2
    for i in range(k):
        for j in range(i + 1, k):
            upp = u.copy()
            upp[i] += h[i]
            upp[j] += h[j]
            umm = u.copy()
            umm[i] -= h[i]
            umm[j] -= h[j]
            val = (total(upp) - fp[i] - fp[j] + 2.0 * f0
                   - fm[i] - fm[j] + total(umm)) / (2.0 * h[i] * h[j])
            H[i, j] = H[j, i] = val
    return H


def _sandwich(spec, adapter, tf, u, x):
    """(plain, robust) standard-error dicts in natural coordinates."""
    H = _hessian(spec, adapter, tf, u, x)
    info = -H  # observed information
    cond = np.linalg.cond(info)
    if not np.isfinite(cond) or cond > 1e12:
        raise ArithmeticError(f"singular Hessian (condition number {cond:.3g})")
    info_inv = np.linalg.inv(info)
    G = _per_obs_scores(spec, adapter, tf, u, x)
    S = G.T @ G
    cov_u_robust = info_inv @ S @ info_inv
    J = tf.jacobian(u)
    cov_plain = J @ info_inv @ J.T
    cov_robust = J @ cov_u_robust @ J.T
    names = tf.names
    se_plain = {n: math.sqrt(max(cov_plain[i, i], 0.0))
                for i, n in enumerate(names)}
    se_robust = {n: math.sqrt(max(cov_robust[i, i], 0.0))
                 for i, n in enumerate(names)}
    # linear-combination SEs commonly reported
    for combo in (("alpha", "beta"),):
        if all(n in names for n in combo):
            idx = [names.index(n) for n in combo]
            v = float(sum(cov_robust[i, j] for i in idx for j in idx))
            se_robust["+".join(combo)] = math.sqrt(max(v, 0.0))
            v = float(sum(cov_plain[i, j] for i in idx for j in idx))
            se_plain["+".join(combo)] = math.sqrt(max(v, 0.0))
    return se_plain, se_robust


def robust_se(spec: ModelSpec, params: dict, data) -> dict:
    """Standalone sandwich SEs at a given parameter point."""
    x = data.values if hasattr(data, "values") else np.asarray(data, dtype=float)
    adapter = _ADAPTERS[spec.model]
    tf = _transform_for(spec)
    u = tf.to_u({k: v for k, v in params.items() if k in tf.names})
    _, se = _sandwich(spec, adapter, tf, u, x)
    return se
