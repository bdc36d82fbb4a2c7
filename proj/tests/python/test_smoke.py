import math

import numpy as np
import pytest

import cprsim


def test_minimal_model_sustains():
    spec = cprsim.ModelSpec("minimal", ec=0.7, ed=1.1, w=-1.0)
    t = cprsim.integrate(spec, 0.5, 0.5)
    assert t["terminal"] == "Steady"
    assert abs(t["R"][-1] - 0.3) < 1e-3
    assert abs(t["x"][-1] - 1.0) < 1e-3


def test_critical_values():
    cv = cprsim.critical_value(cprsim.ModelSpec("rc_linear", ec=0.7, ed=1.1, c=0.25))
    assert cv["value"] == pytest.approx(0.40625, abs=1e-12)
    assert cv["region"] == "LeftBottom"
    assert cprsim.critical_value(cprsim.ModelSpec("minimal", ec=0.7, ed=1.1, w=0.5))["value"] is None
    assert cprsim.region_of(0.7, 1.5) == "RightTop"


def test_stationary_solutions():
    points = cprsim.stationary_solutions(cprsim.ModelSpec("minimal", ec=0.7, ed=1.1, w=-1.0))
    s2 = next(p for p in points if p["label"] == "s2")
    assert s2["R"] == pytest.approx(0.3)
    assert s2["stability"] == "Stable"
    assert all(z.real < 0 for z in s2["eigenvalues"])


def test_density_sweep_shapes():
    grid = cprsim.GridSpec()
    grid.r0_points, grid.x0_points = 4, 11
    opts = cprsim.IntegratorOptions()
    opts.step_size = 1e-2
    d = cprsim.density_sweep(cprsim.ModelSpec("conformity", ec=0.7, ed=1.1), grid, opts)
    assert d["r_star"].shape == (4, 11)
    assert d["terminal"].dtype.kind == "i"
    assert np.all(d["r_star"][:, d["x0_axis"] > 0.55] > 0.1)


def test_ensemble_and_compare():
    cfg = cprsim.AbmConfig()
    cfg.n_players, cfg.t_end, cfg.seed = 200, 10, 5
    spec = cprsim.ModelSpec("resource", ec=0.7, ed=1.1)
    a = cprsim.run_ensemble(cfg, spec, 4)
    b = cprsim.run_ensemble(cfg, spec, 4, threads=2)
    assert a["realizations_x"].shape == (4, 11)
    assert np.array_equal(a["mean_x"], b["mean_x"])
    c = cprsim.compare_ode_abm(spec, cfg, 4)
    assert c["max_gap_R"] == pytest.approx(np.max(c["gap_R"]))


def test_config_and_subcommands(tmp_path):
    cfg = cprsim.parse_config(
        "[model]\nfamily = minimal\nw = -1\n[sweep]\nr0_points = 3\nx0_points = 3\n"
        f"[output]\ndir = {tmp_path}\n"
    )
    assert "abm.seed" in cfg.defaulted
    assert cprsim.parse_config(cfg.serialize()).serialize() == cfg.serialize()
    files = cprsim.compute_subcommand("equilibria", cfg)
    assert "equilibria.csv" in files
    code, _ = cprsim.run_subcommand("density", cfg)
    assert code == 0
    assert (tmp_path / "metadata.json").exists()
    assert (tmp_path / "density_r_star.csv").read_text().startswith("col_0,col_1,col_2\n")


def test_errors():
    with pytest.raises(ValueError):
        cprsim.ModelSpec("minimal", ec=1.2, ed=1.1)
    with pytest.raises(cprsim.ConfigError):
        cprsim.parse_config("[model]\nfamily = nope\n")
    assert math.isfinite(cprsim.ModelSpec("resource", ec=0.3, ed=1.5).greed(0.5, 0.5))
