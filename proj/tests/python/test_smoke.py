import math

import numpy as np
import pytest

import regcalc as rc


def test_grid_and_brownian():
    grid = rc.TimeGrid(1.0, 1024)
    assert grid.nodes == 1025
    assert grid.times()[-1] == 1.0
    w = rc.sample_brownian(grid, seed=3)
    assert w.shape == (1025,)
    assert w[0] == 0.0
    np.testing.assert_array_equal(w, rc.sample_brownian(grid, seed=3))
    assert not np.array_equal(w, rc.sample_brownian(grid, seed=3, path=1))


def test_tensor_algebra():
    a, b = np.array([3.0, 4.0, 0.0]), np.array([1.0, 0.0, 0.0])
    assert rc.projective_norm(np.outer(a, b)) == pytest.approx(5.0, rel=1e-12)
    assert rc.projective_norm(np.eye(2)) == pytest.approx(2.0, rel=1e-12)
    assert rc.trace_pair(np.diag([2.0, 3.0]), np.eye(2)) == pytest.approx(5.0)
    assert rc.dual_graph_norm(np.array([1.0]), np.array([math.pi**2])) == pytest.approx(
        1.0 / math.sqrt(1.0 + math.pi**4), rel=1e-14
    )
    with pytest.raises(ValueError):
        rc.trace_pair(np.eye(2), np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_scalar_qv_closed_form():
    grid = rc.TimeGrid(1.0, 100000)
    x = np.zeros((grid.nodes, 2))
    x[:, 0] = grid.times()
    qv = rc.scalar_qv_eps(grid, x, 1000)
    eps = 0.01
    assert qv[-1] == pytest.approx(eps * (1 - eps) + eps**2 / 3, rel=1e-5)


def test_forward_integral_matches_ito_for_step_integrand():
    grid = rc.TimeGrid(1.0, 4096)
    w = rc.sample_brownian(grid, seed=11)
    x = w[(np.arange(grid.nodes) // 64) * 64]
    ito = rc.ito_sum(grid, x[:, None], w[:, None])
    gaps = [np.abs(rc.forward_integral_eps(grid, x[:, None], w[:, None], m) - ito).max() for m in (4, 16, 64)]
    assert gaps[0] < gaps[2]


def test_heat_path_and_remainder():
    grid = rc.TimeGrid(1.0, 2048)
    path = rc.simulate_heat(grid, modes=4, seed=5, x0=np.ones(4))
    assert path.X.shape == (2049, 4)
    y = path.remainder()
    np.testing.assert_allclose(path.X, y + path.drift_int + path.stoch_int + np.ones(4), atol=1e-13)
    mu = (np.arange(1, 5) * math.pi) ** 2
    a = rc.a_eps_statistic(grid, y, y, 16, mu)
    eps = 16 * grid.dt
    assert a[-1] <= eps * np.max(np.linalg.norm(path.X, axis=1)) ** 2
    # A = 0 makes the remainder vanish
    flat = rc.simulate_heat(grid, modes=3, seed=5, mu=np.zeros(3))
    assert np.abs(flat.remainder()).max() < 1e-13
    assert np.abs(rc.ondrejat_check(path, np.array([1.0, 0.25, 1 / 9, 1 / 16]))).max() < 1e-2


def test_young_and_holder():
    grid = rc.TimeGrid(1.0, 1024)
    b = rc.sample_fbm(grid, 0.75, seed=2)
    h = rc.holder_exponent_estimate(grid, b)
    assert 0.5 < h < 1.0
    res = rc.young_integral(grid, b, b, strict=False)
    assert len(res["level_values"]) == 4
    assert res["value"] == pytest.approx(0.5 * b[-1] ** 2, rel=0.2)
    with pytest.raises(rc.ConvergenceError):
        rc.young_integral(grid, b, b, rel_tol=1e-14)


def test_config_and_experiment():
    cfg = rc.parse_config("n_paths = 6\ndt = 2^-10\nexperiments = E7\n")
    assert cfg.experiments == ["E7"]
    out = rc.run_experiment("E7", cfg, threads=2)
    assert out["id"] == "E7"
    assert out["anchor"]
    assert out["summary"][0]["statistic"] == "richardson_ratio"
    with pytest.raises(rc.ConfigError):
        rc.parse_config("experiments = \n")
