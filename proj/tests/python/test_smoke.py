import math
import os

import numpy as np
import pytest

import mrlab

CONFIG_DIR = os.environ.get("MRLAB_CONFIG_DIR", os.path.join(os.path.dirname(__file__), "..", "..", "configs"))


def read_config(name):
    with open(os.path.join(CONFIG_DIR, name)) as fh:
        return fh.read()


def test_single_dof_hand_values():
    space = mrlab.Space(mrlab.interval_mesh(2), "all")
    assert space.num_dofs == 1
    assert space.stiffness().toarray()[0, 0] == pytest.approx(4.0, abs=1e-14)
    assert space.mass().toarray()[0, 0] == pytest.approx(1 / 3, abs=1e-15)
    value, converged = mrlab.dual_norm(np.ones(1), space, 2.0)
    assert converged
    assert value == pytest.approx(math.sqrt(3 / 13), abs=1e-15)


def test_gram_matches_w12_norm():
    space = mrlab.Space(mrlab.rect_mesh(4, 4), "left")
    v = np.random.default_rng(0).normal(size=space.num_dofs)
    g = space.gram()
    assert mrlab.w1q_norm(v, space, 2.0) == pytest.approx(math.sqrt(v @ (g @ v)), rel=1e-10)


def test_formulas():
    k = mrlab.kappa_r0(1, 1, 3, 4)
    assert k["kappa"] == pytest.approx(1 / 300, abs=1e-17)
    assert k["r0"] == pytest.approx(600 / 299, abs=1e-14)
    assert k["bound"] == 24
    assert mrlab.interp_exponent(4, 4 / 3, 0.5) == 2
    radius, bound = mrlab.sneiberg_isomorphism_radius(0.5, 3, 2)
    assert radius == pytest.approx(1 / 156, abs=1e-15)
    assert bound == 24
    w = mrlab.hilbert_window(1, 1, 3, mode="surjective")
    assert w["radius"] == pytest.approx(1 / 20, abs=1e-15)
    assert w["lo"] < 2 < w["hi"]


def test_window_report_and_hypothesis_error():
    report = mrlab.window(1, 1, 3, s=4)
    assert report["pass"]
    assert report["window"][1] == pytest.approx(600 / 299)
    with pytest.raises(ValueError, match="c_lower <= 1 <= c_upper"):
        mrlab.window(1.5, 2, 3, s=4)


def test_solve_reports(tmp_path):
    report = mrlab.solve(read_config("moving_interface.ini"), str(tmp_path))
    assert report["pass"]
    assert {c["id"] for c in report["criteria"]} >= {"A1", "A2", "A3"}
    assert (tmp_path / "trajectory.csv").read_text().startswith("t,dof_0,")
    zero = mrlab.solve(read_config("zero_forcing.ini"))
    assert zero["pass"]
    assert zero["norms"]["mr"] == 0


def test_estimate_is_deterministic():
    cfg = read_config("reference.ini")
    a = mrlab.estimate(cfg)
    assert a == mrlab.estimate(cfg)
    assert a["estimate"] <= 3


def test_quasilinear_converges():
    report = mrlab.quasilinear(read_config("quasilinear.ini"))
    assert report["pass"]


def test_config_errors_name_the_key():
    with pytest.raises(mrlab.ConfigError, match="time.T"):
        mrlab.solve("[time]\nT = -1\n")
    with pytest.raises(ValueError, match="mesh.colour"):
        mrlab.solve("[mesh]\ncolour = red\n")


def test_acceptance_subset():
    results = mrlab.acceptance(["A4", "A10"])
    assert [r["id"] for r in results] == ["A4", "A10"]
    assert all(r["pass"] for r in results)
