import numpy as np
import pytest

from vollab import cgarch


def _params(**kw):
    base = dict(omega=1.0, rho=0.99, phi=0.05, alpha=0.05, beta=0.85)
    base.update(kw)
    return cgarch.CGarchParams(**base)


def test_filter_matches_reference_loop():
    rng = np.random.default_rng(6)
    eps = rng.standard_normal(400)
    p = _params()
    path = cgarch.filter_components(eps, p)
    prev_m = prev_s2 = prev_e2 = 1.0  # omega start
    for t in range(400):
        mt = 1.0 + 0.99 * (prev_m - 1.0) + 0.05 * (prev_e2 - prev_s2)
        s2t = mt + 0.05 * (prev_e2 - prev_m) + 0.85 * (prev_s2 - prev_m)
        assert path.m[t] == pytest.approx(mt, rel=1e-12)
        assert path.sigma2[t] == pytest.approx(s2t, rel=1e-12)
        prev_m, prev_s2, prev_e2 = mt, s2t, eps[t] ** 2


def test_decomposition_identity():
    rng = np.random.default_rng(12)
    eps = rng.standard_normal(200)
    path = cgarch.filter_components(eps, _params())
    np.testing.assert_allclose(path.sigma2, path.m + path.q, rtol=1e-14)


def test_component_persistence():
    p = _params()
    assert cgarch.component_persistence(p) == (0.99, pytest.approx(0.90))


def test_component_decay_rates_via_autoregression():
    # the transitory component decays at alpha+beta, the trend at rho;
    # recover both rates by regressing each component on its own lag
    p = _params(omega=0.5, rho=0.995, phi=0.03, alpha=0.06, beta=0.88)
    eps = cgarch.simulate(p, 150_000, 3000, seed=21)
    path = cgarch.filter_components(eps, p)
    q, m = path.q, path.m
    slope_q = np.polyfit(q[:-1], q[1:], 1)[0]
    slope_m = np.polyfit(m[:-1] - 0.5, m[1:] - 0.5, 1)[0]
    assert slope_q == pytest.approx(0.94, abs=0.02)
    assert slope_m == pytest.approx(0.995, abs=0.004)


def test_parameter_ordering_enforced():
    with pytest.raises(ValueError, match="alpha\\+beta must be < rho"):
        _params(rho=0.85)
    with pytest.raises(ValueError, match="rho"):
        _params(rho=1.0)
    with pytest.raises(ValueError, match="omega"):
        _params(omega=0.0)


def test_simulate_deterministic():
    p = _params()
    a = cgarch.simulate(p, 50, 10, seed=5)
    b = cgarch.simulate(p, 50, 10, seed=5)
    np.testing.assert_array_equal(a, b)
