import math

import numpy as np
import pytest

from vollab import gas
from vollab.innovations import InnovationSpec


def _params(family="norm", shape=(), a=(0.02, 0.05), b=(0.9, 0.95), power=0.0):
    return gas.GasParams.from_targets(0.0, 1.0, a, b,
                                      InnovationSpec(family, shape), power)


def test_from_targets_round_trip():
    p = gas.GasParams.from_targets(0.08, 0.9, (0.01, 0.05), (0.99, 0.97), "norm")
    assert p.mu_star == pytest.approx(0.08, rel=1e-12)
    assert p.sigma_star == pytest.approx(0.9, rel=1e-12)
    np.testing.assert_allclose(p.theta0, [0.08, math.log(0.9)])


def test_normal_filter_matches_reference_loop():
    rng = np.random.default_rng(2)
    x = rng.standard_normal(300)
    p = _params()
    path = gas.gas_filter(x, p)
    th = np.array(p.theta0)
    for t in range(300):
        np.testing.assert_allclose(path.theta[t], th, rtol=1e-10)
        sigma = math.exp(th[1])
        z = (x[t] - th[0]) / sigma
        s = np.array([z / sigma, z * z - 1.0])
        s = np.clip(s, -p.score_clip, p.score_clip)
        np.testing.assert_allclose(path.score[t], s, rtol=1e-10)
        th = np.array(p.kappa) + np.array(p.a) * s + np.array(p.b) * th


def test_student_t_filter_matches_generic_path():
    # the compiled fast path and the generic score_wrt path must agree
    rng = np.random.default_rng(9)
    x = rng.standard_normal(150)
    fast = gas.gas_filter(x, _params("std", (6.0,)))
    slow_p = _params("sstd", (6.0,))  # skew 1.0 sstd equals std
    slow = gas.gas_filter(x, slow_p)
    np.testing.assert_allclose(fast.theta, slow.theta, atol=1e-8)


def test_information_matrix_normal():
    info = gas.information_matrix(_params(), np.array([0.0, 0.0]))
    np.testing.assert_allclose(info, [[1.0, 0.0], [0.0, 2.0]], atol=1e-8)


def test_information_matrix_student_t():
    nu = 7.0
    info = gas.information_matrix(_params("std", (nu,)), np.array([0.0, 0.0]))
    s2 = nu / (nu - 2.0)
    want = [[(nu + 1.0) / (nu + 3.0) * s2, 0.0], [0.0, 2.0 * nu / (nu + 3.0)]]
    np.testing.assert_allclose(info, want, atol=1e-7)


def test_scaled_score_is_martingale_difference():
    for power in (0.0, 1.0):
        for fam, shape in (("norm", ()), ("std", (5.0,))):
            p = _params(fam, shape, power=power)
            dev = gas.scaled_score_is_md_check(p, 200_000, seed=1)
            assert dev < 0.01, (fam, power)


def test_variance_link_equals_manual_garch():
    rng = np.random.default_rng(4)
    x = rng.standard_normal(200)
    kappa, a, b = 0.05, 0.1, 0.95
    s2 = gas.filter_variance_link(x, 0.0, kappa, a, b)
    # equivalently a GARCH(1,1) with omega=kappa, alpha=a, beta=b-a
    ref = np.empty(200)
    prev, prev_e2 = kappa / (1.0 - b), kappa / (1.0 - b)
    for t in range(200):
        ref[t] = kappa + a * (prev_e2 - prev) + b * prev
        prev, prev_e2 = ref[t], x[t] ** 2
    np.testing.assert_allclose(s2, ref, rtol=1e-10)


def test_simulate_deterministic_and_stationary():
    p = _params("std", (6.0,), a=(0.0, 0.05), b=(0.5, 0.97))
    r1 = gas.gas_simulate(p, 5000, 500, seed=13)
    r2 = gas.gas_simulate(p, 5000, 500, seed=13)
    np.testing.assert_array_equal(r1, r2)
    assert abs(np.mean(r1)) < 0.1


def test_score_clip_is_configurable():
    p = gas.GasParams((0.0, 0.0), (0.02, 0.05), (0.9, 0.95), "norm",
                      score_clip=0.5)
    x = np.array([0.0, 5.0, -5.0, 0.0])
    path = gas.gas_filter(x, p)
    assert np.max(np.abs(path.score)) <= 0.5
    with pytest.raises(ValueError, match="score_clip"):
        gas.GasParams((0.0, 0.0), (0.0, 0.0), (0.9, 0.9), "norm", score_clip=0.0)


def test_update_equation_rendering():
    p = gas.GasParams((0.01, 0.0226), (0.0, 0.0508), (0.9, 0.9749), "norm")
    text = gas.update_equation(p)
    assert "0.0226 + 0.0508 s[t] + 0.9749 theta[t]" in text
    assert text.count("theta[t+1]") == 2


def test_params_validation():
    with pytest.raises(ValueError, match="length 2"):
        gas.GasParams((0.0,), (0.0, 0.0), (0.9, 0.9))
    with pytest.raises(ValueError, match="lie in"):
        gas.GasParams((0.0, 0.0), (0.0, 0.0), (1.0, 0.9))
    with pytest.raises(ValueError, match="scaling_power"):
        gas.GasParams((0.0, 0.0), (0.0, 0.0), (0.9, 0.9), scaling_power=0.3)
