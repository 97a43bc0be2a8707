import numpy as np
import pytest

from vollab import fgarch
from vollab.innovations import InnovationSpec, StandardizedDensity


def _plain(omega=0.05, alpha=0.1, beta=0.85, innovation="norm"):
    return fgarch.FGarchParams(omega=omega, alpha=(alpha,), beta=(beta,),
                               innovation=innovation)


def test_plain_garch_filter_matches_reference_loop():
    rng = np.random.default_rng(0)
    eps = rng.standard_normal(500)
    p = _plain()
    path = fgarch.filter(eps, p)
    # direct sigma^2 recursion: sigma^2_0 at its stationary level and a
    # zero presample shock
    P = 0.1 + 0.85
    s2 = np.empty(500)
    prev, prev_e2 = 0.05 / (1.0 - P), 0.0
    for t in range(500):
        s2[t] = 0.05 + 0.1 * prev_e2 + 0.85 * prev
        prev, prev_e2 = s2[t], eps[t] ** 2
    np.testing.assert_allclose(path.sigma**2, s2, rtol=1e-12)
    np.testing.assert_allclose(path.z, eps / path.sigma, rtol=1e-12)


def test_shock_expectation_is_one_in_the_plain_config():
    for fam, shape in (("norm", ()), ("std", (5.0,)), ("ged", (1.3,)),
                       ("nig", (2.0, -0.4))):
        d = StandardizedDensity(InnovationSpec(fam, shape))
        rho = fgarch.shock_expectation(d, zeta1=0.0, zeta2=0.0, delta=2.0)
        assert rho == pytest.approx(1.0, abs=1e-6), fam


def test_shock_expectation_against_monte_carlo():
    d = StandardizedDensity(InnovationSpec("std", (4.1,)))
    zeta1, zeta2, delta = -0.1815, 1.2621, 2.0349
    rho = fgarch.shock_expectation(d, zeta1, zeta2, delta)
    z = d.sample(2_000_000, seed=3)
    g = (np.abs(z - zeta2) - zeta1 * (z - zeta2)) ** delta
    mc, se = np.mean(g), np.std(g) / np.sqrt(len(g))
    assert abs(rho - mc) < 3 * se


def test_persistence_and_unconditional_variance():
    p = _plain()
    assert fgarch.persistence(p) == pytest.approx(0.95, abs=1e-9)
    assert fgarch.unconditional_variance(p) == pytest.approx(0.05 / 0.05, rel=1e-9)
    # generic gamma exponent
    assert fgarch.unconditional_variance_from(0.05, 0.95, 1.0) == pytest.approx(
        0.05 / 0.05**2, rel=1e-12)


def test_half_life():
    assert fgarch.half_life(0.5) == pytest.approx(1.0)
    assert fgarch.half_life(0.9749) == pytest.approx(np.log(0.5) / np.log(0.9749))
    with pytest.warns(UserWarning):
        assert np.isinf(fgarch.half_life(1.0))
    with pytest.raises(ValueError):
        fgarch.half_life(-0.2)


def test_decay_curve_is_geometric():
    c = fgarch.decay_curve(0.9, 5)
    np.testing.assert_allclose(c, 0.9 ** np.arange(1, 6))


def test_simulated_variance_matches_formula():
    p = _plain(omega=0.025, alpha=0.05, beta=0.90)
    r = fgarch.simulate(p, 400_000, 2000, seed=2)
    assert np.var(r) == pytest.approx(fgarch.unconditional_variance(p), rel=0.05)


def test_simulate_is_deterministic_per_seed():
    p = _plain()
    a = fgarch.simulate(p, 100, 50, seed=9)
    b = fgarch.simulate(p, 100, 50, seed=9)
    np.testing.assert_array_equal(a, b)


def test_tgarch_fgarch_mapping_identity():
    t = fgarch.TGarchParams(omega=0.04, alpha=0.05, gamma_lev=0.10, beta=0.88,
                            innovation=InnovationSpec("std", (6.0,)))
    g = fgarch.tgarch_as_fgarch(t)
    rng = np.random.default_rng(1)
    eps = rng.standard_normal(300)
    a = fgarch.filter_tgarch(eps, t).sigma
    b = fgarch.filter(eps, g).sigma
    np.testing.assert_allclose(a, b, rtol=1e-8)


def test_news_impact_asymmetry():
    t = fgarch.TGarchParams(omega=0.04, alpha=0.05, gamma_lev=0.10, beta=0.88)
    grid = np.array([-2.0, 0.0, 2.0])
    nic = fgarch.news_impact(t, grid)
    # negative news raises variance more than positive news of equal size
    assert nic[0] > nic[2]
    assert nic[1] == pytest.approx(min(nic))


def test_param_validation():
    with pytest.raises(ValueError):
        fgarch.FGarchParams(omega=-0.1, alpha=(0.1,), beta=(0.8,))
    with pytest.raises(ValueError):
        fgarch.FGarchParams(omega=0.1, alpha=(-0.1,), beta=(0.8,))
    with pytest.raises(ValueError):
        fgarch.FGarchParams(omega=0.1, alpha=(0.1,), beta=(0.8,), zeta1=(1.5,))
    with pytest.raises(ValueError):
        fgarch.FGarchParams(omega=0.1, alpha=(0.1,), beta=(0.8,), gamma=0.0)
