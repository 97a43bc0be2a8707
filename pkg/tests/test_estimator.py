import math

import numpy as np
import pytest

from vollab import estimator, fgarch
from vollab.innovations import InnovationSpec


def test_info_criteria_formulas():
    out = estimator.info_criteria(-1500.0, 4, 1000)
    N, p, L = 1000, 4, -1500.0
    assert out["AIC"] == pytest.approx(-2 * L / N + 2 * p / N, rel=1e-12)
    assert out["BIC"] == pytest.approx(-2 * L / N + p * math.log(N) / N, rel=1e-12)
    assert out["SIC"] == pytest.approx(-2 * L / N + math.log((N + 2 * p) / N), rel=1e-12)
    assert out["HQIC"] == pytest.approx(
        -2 * L / N + 2 * p * math.log(math.log(N)) / N, rel=1e-12)


def test_modelspec_validation():
    with pytest.raises(ValueError, match="unknown model"):
        estimator.ModelSpec("arima")
    with pytest.raises(ValueError, match="unknown family"):
        estimator.ModelSpec("garch", "cauchy")
    with pytest.raises(ValueError, match="variance link"):
        estimator.ModelSpec("gas", "std", link="variance")


def _garch_data(n=4000, seed=10):
    p = fgarch.FGarchParams(omega=0.05, alpha=(0.08,), beta=(0.88,),
                            innovation=InnovationSpec("std", (6.0,)))
    return fgarch.simulate(p, n, 2000, seed=seed)


def test_fit_recovers_garch_parameters():
    r = _garch_data()
    fr = estimator.fit(estimator.ModelSpec("garch", "std"), r, n_starts=1)
    assert fr.convergence["converged"]
    assert fr.params["omega"] == pytest.approx(0.05, abs=0.05)
    assert fr.params["alpha"] == pytest.approx(0.08, abs=0.05)
    assert fr.params["beta"] == pytest.approx(0.88, abs=0.08)
    assert fr.params["nu"] == pytest.approx(6.0, abs=2.5)
    # sandwich SEs exist and are positive for every free parameter
    for name in ("omega", "alpha", "beta", "nu"):
        assert fr.se_robust[name] > 0
        assert fr.se_plain[name] > 0
    assert fr.n_obs == 4000
    assert np.isfinite(fr.loglik)
    assert set(fr.criteria) == {"AIC", "BIC", "SIC", "HQIC"}


def test_estimand_and_combined_se():
    r = _garch_data(3000)
    fr = estimator.fit(estimator.ModelSpec("garch", "std"), r, n_starts=1)
    ab = fr.estimand("alpha+beta")
    assert ab == pytest.approx(fr.params["alpha"] + fr.params["beta"], rel=1e-12)
    # the sum's SE uses the covariance, so it is not just the SE sum
    se = fr.robust_se_of("alpha+beta")
    assert 0 < se < fr.se_robust["alpha"] + fr.se_robust["beta"]
    with pytest.raises(KeyError):
        fr.estimand("gamma_lev")


def test_fix_pins_parameters():
    r = _garch_data(3000)
    spec = estimator.ModelSpec("garch", "std", fix={"nu": 4.1})
    fr = estimator.fit(spec, r, n_starts=1)
    assert fr.params["nu"] == 4.1
    assert "nu" not in fr.se_robust


def test_fit_is_deterministic():
    r = _garch_data(2000)
    spec = estimator.ModelSpec("garch", "norm")
    a = estimator.fit(spec, r, seed=3, n_starts=2)
    b = estimator.fit(spec, r, seed=3, n_starts=2)
    assert a.params == b.params
    assert a.loglik == b.loglik


def test_min_obs_guard():
    with pytest.raises(ValueError, match="min_obs|observations"):
        estimator.fit(estimator.ModelSpec("garch"), np.random.default_rng(0).standard_normal(100))


def test_filtered_path_attached():
    r = _garch_data(2000)
    fr = estimator.fit(estimator.ModelSpec("garch", "norm"), r, n_starts=1,
                       compute_se=False)
    assert fr.path is not None
    assert len(fr.path.sigma) == len(r)
    # unconditional sd of the data should sit near the average filtered sd
    assert np.mean(fr.path.sigma) == pytest.approx(np.std(r), rel=0.2)
