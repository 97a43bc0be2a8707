"""Acceptance gate: twelve desk-scale checks, one test per criterion.

Every numeric target below is a frozen oracle value; tolerances are part
of the contract and must not be loosened.  The heavier studies (criteria
5 and 6) run at desk scale with pinned seeds so the whole gate stays
deterministic.
"""

import math

import numpy as np
import pytest
from scipy import integrate

from vollab import (
    beta_egarch,
    diagnostics,
    estimator,
    fgarch,
    gas,
    innovations,
    mcs,
)
from vollab.innovations import InnovationSpec, StandardizedDensity

# one representative spec per innovation family
ALL_SPECS = [
    InnovationSpec("norm"),
    InnovationSpec("snorm", skew=0.85),
    InnovationSpec("std", (6.0,)),
    InnovationSpec("sstd", (6.0,), skew=0.85),
    InnovationSpec("ged", (1.4,)),
    InnovationSpec("sged", (1.4,), skew=1.2),
    InnovationSpec("nig", (2.0, -0.5)),
    InnovationSpec("ghyp", (-0.5, 2.0, 0.5)),
    InnovationSpec("ghst", (8.0, -1.0)),
    InnovationSpec("jsu", (-0.7, 1.5)),
    InnovationSpec("ast", (5.0, 8.0, 0.4)),
    InnovationSpec("ast1", (6.0, 0.4)),
    InnovationSpec("ald", (0.8,)),
]


def test_01_tpr_arithmetic_exact():
    assert mcs.tpr(mcs.TprInput(0.9739, 0.9327, 95.0)) == pytest.approx(90.98, abs=0.01)
    assert mcs.tpr(mcs.TprInput(0.9739, 0.9428, 95.0)) == pytest.approx(91.97, abs=0.01)


def test_02_half_life():
    assert fgarch.half_life(0.9749) == pytest.approx(27.3, abs=0.1)
    assert fgarch.half_life(0.9988) == pytest.approx(577.0, abs=1.0)
    assert fgarch.half_life(0.9550) == pytest.approx(15.0, abs=0.2)


def test_03_persistence_oracle():
    # (a) plain configuration: the shock expectation is E[z^2] = 1 for
    # every standardized innovation; check both the API value and the
    # quadrature integral itself
    for spec in ALL_SPECS:
        d = StandardizedDensity(spec)
        assert fgarch.shock_expectation(d, 0.0, 0.0, 2.0) == pytest.approx(1.0, abs=1e-6)
        b = d.support_bound()
        f = lambda z: z * z * d.pdf(z)
        var = (integrate.quad(f, -b, b, limit=200)[0]
               + integrate.quad(f, b, np.inf, limit=200)[0]
               + integrate.quad(f, -np.inf, -b, limit=200)[0])
        assert var == pytest.approx(1.0, abs=1e-6), spec.family

    # (b) reference true parameter set in the plain configuration
    p = fgarch.FGarchParams(omega=0.0518, alpha=(0.1011,), beta=(0.7988,),
                            innovation=InnovationSpec("std", (4.1,)))
    assert fgarch.persistence(p) == pytest.approx(0.8999, abs=0.002)

    # (c) quadrature vs 10^7-draw Monte Carlo on the asymmetric set
    d = StandardizedDensity(InnovationSpec("std", (4.1,)))
    zeta1, zeta2, delta = -0.1815, 1.2621, 2.0349
    rho_quad = fgarch.shock_expectation(d, zeta1, zeta2, delta)
    z = d.sample(10_000_000, seed=3)
    g = (np.abs(z - zeta2) - zeta1 * (z - zeta2)) ** delta
    mc, se = float(np.mean(g)), float(np.std(g)) / math.sqrt(len(g))
    assert abs(rho_quad - mc) < 3 * se


def test_04_unconditional_variance_identity():
    # frozen point estimates: omega 0.0443, persistence 0.9749, gamma 1.9993
    v = fgarch.unconditional_variance_from(0.0443, 0.9749, 1.9993)
    assert v == pytest.approx(1.766, abs=0.01)

    p = fgarch.FGarchParams(omega=0.025, alpha=(0.05,), beta=(0.90,),
                            innovation=InnovationSpec("std", (8.0,)))
    r = fgarch.simulate(p, 1_000_000, 2000, seed=2)
    assert np.var(r) == pytest.approx(fgarch.unconditional_variance(p), rel=0.05)


def test_05_garch_study_desk_scale():
    design = mcs.McsDesign(
        dgp={"model": "garch", "omega": 0.0518, "alpha": 0.1011,
             "beta": 0.7988, "family": "std", "shape": (4.1,)},
        truth=0.8999, target="alpha+beta", seed=20260823,
        sample_sizes=(2000, 4000, 8000), replications=50,
        fit_specs=tuple((f, estimator.ModelSpec("garch", f))
                        for f in ("norm", "std", "ged", "nig")))
    report = mcs.run_study(design, jobs=1)

    # (a) correctly specified innovation at the largest N
    assert report.cell("std", 8000)["mean_estimate"] == pytest.approx(0.8999, abs=0.03)
    # (b) the average robust SE falls in N for every assumed innovation
    for fam in ("norm", "std", "ged", "nig"):
        ses = [report.cell(fam, n)["se_qmle"] for n in (2000, 4000, 8000)]
        assert ses[0] > ses[1] > ses[2], fam
    # (c) the Normal QMLE is consistent but not efficient
    assert report.cell("norm", 8000)["se_qmle"] >= report.cell("std", 8000)["se_qmle"]


def test_06_gas_study_desk_scale():
    design = mcs.McsDesign(
        dgp={"model": "gas", "a_sigma": 0.2061, "b_sigma": 0.9739,
             "a_mu": 0.0023, "b_mu": 0.9919, "mu_star": 0.0882,
             "sigma_star": 0.8867, "family": "std", "shape": (4.1,)},
        truth=0.9739, target="b_sigma", seed=20260823,
        sample_sizes=(5000, 10000), replications=25,
        fit_specs=(("std", estimator.ModelSpec("gas", "std")),
                   ("norm", estimator.ModelSpec("gas", "norm",
                                                score_clip=math.inf))))
    report = mcs.run_study(design, jobs=1)

    for n in (5000, 10000):
        assert abs(report.cell("std", n)["bias"]) < 0.02
        assert report.cell("norm", n)["bias"] < 0.0
    # misspecified Normal filter drags the persistence estimate down
    assert report.cell("norm", 10000)["bias"] < -0.02


def test_07_gas_garch_correspondence():
    p = fgarch.FGarchParams(omega=0.05, alpha=(0.08,), beta=(0.89,),
                            innovation=InnovationSpec("norm"))
    r = fgarch.simulate(p, 10_000, 2000, seed=4)
    g = estimator.fit(estimator.ModelSpec("garch", "norm"), r,
                      n_starts=1, compute_se=False)
    ab = g.params["alpha"] + g.params["beta"]
    gl = estimator.fit(estimator.ModelSpec("gas", "norm"), r,
                       n_starts=1, compute_se=False)
    assert abs(ab - gl.params["b_sigma"]) < 0.02


def test_08_beta_egarch_round_trip():
    # one component: pinned true values and the reference refit with its
    # reported standard errors
    truth1 = beta_egarch.BetaEgarchParams(
        omega=0.0142, phi1=0.9721, kappa1=0.0402, kappa_star=0.0337,
        nu=6.2102, eta=0.8709)
    r = beta_egarch.simulate_beta(truth1, 5000, 1000, seed=1)
    fr = estimator.fit(estimator.ModelSpec("betaegarch", "sstd"), r, n_starts=1)
    bands = {"phi1": (0.9771, 0.0034), "kappa1": (0.0413, 0.0041),
             "kappa_star": (0.0324, 0.0030), "eta": (0.8611, 0.0163),
             "nu": (6.0746, 0.4639)}
    for name, (center, se) in bands.items():
        assert abs(fr.params[name] - center) <= 3 * se, name

    # two components: the persistence pair
    truth2 = beta_egarch.BetaEgarchParams(
        omega=0.0529, phi1=0.9988, phi2=0.9550, kappa1=0.0076,
        kappa2=0.0301, kappa_star=0.0379, nu=6.3534, eta=0.8742,
        components=2)
    r2 = beta_egarch.simulate_beta(truth2, 5000, 1000, seed=6)
    fr2 = estimator.fit(estimator.ModelSpec("betaegarch", "sstd",
                                            components=2), r2, n_starts=1)
    assert abs(fr2.params["phi1"] - 0.9979) <= 3 * 0.0012
    assert abs(fr2.params["phi2"] - 0.9529) <= 3 * 0.0078

    # shock-response shares of the reference kappa pair
    long, short = beta_egarch.shock_response_shares(truth2)
    assert 100 * long == pytest.approx(20.2, abs=0.1)
    assert 100 * short == pytest.approx(79.8, abs=0.1)


def test_09_score_correctness():
    grid = np.linspace(-4.0, 4.0, 25)
    mu, lam = 0.05, 0.1
    h = 1e-6
    for spec in ALL_SPECS:
        d = StandardizedDensity(spec)
        for which in ("location", "log-scale"):
            got = np.asarray(innovations.score_wrt(d, grid, which, mu=mu, lam=lam))
            r = mu + math.exp(lam) * grid
            if which == "location":
                fd = (innovations.obs_log_pdf(d, r, mu + h, lam)
                      - innovations.obs_log_pdf(d, r, mu - h, lam)) / (2 * h)
            else:
                fd = (innovations.obs_log_pdf(d, r, mu, lam + h)
                      - innovations.obs_log_pdf(d, r, mu, lam - h)) / (2 * h)
            denom = np.maximum(np.abs(fd), 1.0)
            assert np.max(np.abs(got - fd) / denom) < 1e-4, (spec.family, which)

    # conditional score of the log-scale filter
    R = np.linspace(-5.0, 5.0, 25)
    nu, eta = 6.2102, 0.8709
    hh = 1e-7
    fd = (beta_egarch.log_pdf(R, lam + hh, nu, eta)
          - beta_egarch.log_pdf(R, lam - hh, nu, eta)) / (2 * hh)
    got = beta_egarch.conditional_score(R, np.full_like(R, lam), nu, eta)
    np.testing.assert_allclose(got, fd, atol=1e-6)

    # martingale-difference property of u and of the scaled score
    z = beta_egarch.sample_skewt(nu, eta, 1_000_000, seed=11)
    u = beta_egarch.conditional_score(z, np.zeros_like(z), nu, eta)
    assert abs(np.mean(u)) < 3 * np.std(u) / math.sqrt(len(u))
    for fam, shape in (("norm", ()), ("std", (5.0,))):
        d = StandardizedDensity(InnovationSpec(fam, shape))
        zz = d.sample(1_000_000, seed=7)
        s = np.asarray(innovations.score_wrt(d, zz, "log-scale"))
        assert abs(np.mean(s)) < 3 * np.std(s) / math.sqrt(len(s)), fam


def test_10_distribution_hygiene():
    for spec in ALL_SPECS:
        d = StandardizedDensity(spec)
        b = d.support_bound()
        total, _ = integrate.quad(d.pdf, -b, b, limit=200)
        mean, _ = integrate.quad(lambda z: z * d.pdf(z), -b, b, limit=200)
        var, _ = integrate.quad(lambda z: z * z * d.pdf(z), -b, b, limit=200)
        assert total == pytest.approx(1.0, abs=1e-6), spec.family
        assert mean == pytest.approx(0.0, abs=1e-4), spec.family
        assert var == pytest.approx(1.0, abs=1e-4), spec.family

    base = StandardizedDensity("norm")
    assert innovations.fs_skew(base, 1.0) is base

    grid = np.linspace(-5.0, 5.0, 101)
    for eta in (0.7, 1.3):
        left = innovations.fs_skew(StandardizedDensity(InnovationSpec("std", (7.0,))), eta)
        right = innovations.fs_skew(StandardizedDensity(InnovationSpec("std", (7.0,))), 1.0 / eta)
        assert np.max(np.abs(left.pdf(grid) - right.pdf(-grid))) <= 1e-10


def test_11_diagnostics_size_and_power():
    rej_wlb = rej_lm = 0
    for seed in range(200):
        x = np.random.default_rng(seed).standard_normal(500)
        rej_wlb += diagnostics.weighted_ljung_box(x, 5).p_value < 0.05
        rej_lm += diagnostics.arch_lm(x, 5).p_value < 0.05
    assert 0.02 <= rej_wlb / 200 <= 0.09
    assert 0.02 <= rej_lm / 200 <= 0.09

    p = fgarch.FGarchParams(omega=0.0518, alpha=(0.1011,), beta=(0.7988,),
                            innovation=InnovationSpec("std", (4.1,)))
    r = fgarch.simulate(p, 3000, 2000, seed=8)
    assert diagnostics.arch_lm(r, 5).p_value < 1e-10
    fr = estimator.fit(estimator.ModelSpec("garch", "std"), r,
                       n_starts=1, compute_se=False)
    z = r / fr.path.sigma
    assert diagnostics.arch_lm(z, 5).p_value > 0.05


def test_12_mcs_determinism(tmp_path):
    design = mcs.McsDesign(
        dgp={"model": "garch", "omega": 0.05, "alpha": 0.08, "beta": 0.88,
             "family": "std", "shape": (6.0,)},
        truth=0.96, target="alpha+beta", seed=99,
        sample_sizes=(600,), replications=4,
        fit_specs=(("norm", estimator.ModelSpec("garch", "norm")),),
        max_failure_rate=0.9)
    paths = [tmp_path / f"report_{i}.csv" for i in range(3)]
    mcs.run_study(design, jobs=1).to_csv(paths[0])
    mcs.run_study(design, jobs=1).to_csv(paths[1])
    mcs.run_study(design, jobs=2).to_csv(paths[2])
    a, b, c = (p.read_bytes() for p in paths)
    assert a == b == c
