import json

import numpy as np
import pytest

import pyfal


def test_instances_listed():
    names = {d["name"] for d in pyfal.list_instances()}
    assert {"quad_saddle_1d", "ncc_toy", "constrained_toy"} <= names


def test_saddle_solve_certified():
    r = pyfal.solve({"problem": "quad_saddle_box", "solver": "scc", "epsilon": 1e-6},
                    include_timing=False)
    assert r.exit_code == 0
    assert r.certified
    assert r.report["certificate"]["residual"] <= 1e-6
    assert r.trace_csv.startswith("phase,outer_iter")


def test_alm_outer_count_matches_bounds(tmp_path):
    cfg = {"problem": "constrained_toy", "solver": "alm", "epsilon": 0.1,
           "tau": 0.5, "epsilon_0": 1.0}
    path = tmp_path / "alm.json"
    path.write_text(json.dumps(cfg))
    r = pyfal.solve(path, include_timing=False)
    b = pyfal.bounds(cfg)
    assert r.certified
    assert r.report["outer_iterations"] == b["alm"]["K"] + 1
    assert b["alm"]["K"] == pyfal.alm_iteration_count(0.1, 1.0, 0.5)


def test_bad_config_names_key():
    with pytest.raises(pyfal.ConfigError, match="epsilon_hat_0"):
        pyfal.solve({"problem": "ncc_toy", "solver": "ncc", "epsilon": 0.1,
                     "epsilon_hat_0": 0.06})


def test_projections():
    v = np.array([3.0, -1.0, 4.0])
    np.testing.assert_array_equal(pyfal.positive_part(v), [3.0, 0.0, 4.0])
    p = pyfal.project_nonneg_ball(v, 1.0)
    assert np.all(p >= 0.0)
    assert np.linalg.norm(p) <= 1.0 + 1e-15
