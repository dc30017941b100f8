import json

import numpy as np
import pytest

from oqhlab.errors import ParameterError, ResourceError
from oqhlab.experiments import (ALPHA_SET, REGISTRY, SCHEMA, Ensemble, ExperimentConfig, default_config,
                                fit_log_slope, line_plot_svg, random_signal, run_experiment, trial_rngs)


def test_fit_log_slope_exact():
    slope, icpt, resid = fit_log_slope([(j, 2.0 ** -j) for j in range(8, 15)])
    assert slope == pytest.approx(-1.0, abs=1e-12)
    assert icpt == pytest.approx(0.0, abs=1e-10)
    assert resid < 1e-12


def test_fit_log_slope_constant():
    slope, _, resid = fit_log_slope([(j, 3.0) for j in range(5)])
    assert slope == pytest.approx(0.0, abs=1e-12)
    assert resid < 1e-12


def test_fit_log_slope_noisy():
    rng = np.random.default_rng(7)
    pts = [(j, 2.0 ** -j * (1 + rng.uniform(-0.01, 0.01))) for j in range(8, 15)]
    slope, _, resid = fit_log_slope(pts)
    assert -1.05 <= slope <= -0.95
    assert resid < 0.02


@pytest.mark.parametrize("pts", [[(1, 1.0), (2, 2.0)], [(1, 1.0), (2, 0.0), (3, 1.0)]])
def test_fit_log_slope_rejects(pts):
    with pytest.raises(ParameterError):
        fit_log_slope(pts)


def test_config_round_trip():
    cfg = default_config("sparse-ratio", 42)
    obj = cfg.to_json()
    assert obj["schema"] == SCHEMA
    back = ExperimentConfig.from_json(json.loads(json.dumps(obj)))
    assert back == cfg


def test_config_load(tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"name": "gauss-law", "seed": 3, "options": {"Q_max": 20}}))
    cfg = ExperimentConfig.load(p)
    assert cfg.seed == 3 and cfg.options["Q_max"] == 20


@pytest.mark.parametrize("obj,exc", [
    ({"name": "gauss-law"}, ParameterError),
    ({"name": "gauss-law", "seed": None}, ParameterError),
    ({"name": "gauss-law", "seed": 1, "schema": "other/9"}, ParameterError),
    ({"name": "gauss-law", "seed": 1, "colour": "red"}, ParameterError),
    ({"name": "gauss-law", "seed": 1, "j_range": [8, 17]}, ResourceError),
    ({"name": "gauss-law", "seed": 1, "s_range": [1, 5]}, ResourceError),
    ({"name": "gauss-law", "seed": 1, "grid": 1 << 21}, ResourceError),
    ({"name": "gauss-law", "seed": 1, "ensemble": {"count": 10001}}, ResourceError),
    ({"name": "gauss-law", "seed": 1, "ensemble": {"kind": "cauchy"}}, ParameterError),
    ({"name": "gauss-law", "seed": 1, "alphas": ["nonsense"]}, ParameterError),
])
def test_config_validation(obj, exc):
    with pytest.raises(exc):
        ExperimentConfig.from_json(obj)


def test_unknown_experiment_lists_registry():
    with pytest.raises(ParameterError) as ei:
        default_config("no-such-thing", 0)
    for name in REGISTRY:
        assert name in str(ei.value)


def test_registry_contents():
    assert {"gauss-law", "closed-form", "multiplier-l2", "minor-arc-decay", "major-arc-approx",
            "ej-kernel-bound", "sparse-ratio", "mhl-sparse", "universal-domination", "bessel",
            "transfer-identity", "weighted"} <= set(REGISTRY)
    assert len(ALPHA_SET) == 8


def test_trial_rngs_reproducible():
    a = [r.standard_normal(4) for r in trial_rngs(5, 3)]
    b = [r.standard_normal(4) for r in trial_rngs(5, 3)]
    assert all(np.array_equal(x, y) for x, y in zip(a, b))
    assert not np.array_equal(a[0], a[1])


@pytest.mark.parametrize("kind", ["rademacher", "gaussian", "indicator", "sparse"])
def test_random_signal_kinds(kind):
    f = random_signal(np.random.default_rng(0), kind, 64, offset=5)
    # Signal trims zero tails, so the support lies inside [5, 69)
    assert f.offset >= 5 and f.offset + len(f.values) <= 69
    assert np.any(f.values != 0)
    if kind == "rademacher":
        assert set(np.unique(f.values.real)) <= {-1.0, 1.0}


def test_small_run_deterministic_and_written(tmp_path):
    cfg = ExperimentConfig.from_json({"name": "gauss-law", "seed": 1, "options": {"Q_max": 30},
                                      "out": str(tmp_path)})
    rep = run_experiment(cfg)
    assert rep.passed
    assert run_experiment(cfg).csv_text() == rep.csv_text()
    assert (tmp_path / "gauss-law.csv").read_text() == rep.csv_text()
    meta = json.loads((tmp_path / "gauss-law.json").read_text())
    assert meta["anchor"] == rep.anchor and meta["passed"] is True
    assert meta["config"]["seed"] == 1


def test_seed_changes_ensemble_output():
    base = {"name": "mhl-sparse", "ensemble": {"count": 5}}
    a = run_experiment(ExperimentConfig.from_json({**base, "seed": 1})).csv_text()
    b = run_experiment(ExperimentConfig.from_json({**base, "seed": 2})).csv_text()
    assert a != b


def test_csv_float_format_round_trips():
    rep = run_experiment(ExperimentConfig.from_json({"name": "closed-form", "seed": 0}))
    lines = rep.csv_text().splitlines()
    assert lines[0].split(",") == rep.columns
    i = rep.columns.index("abs_err")
    assert float(lines[1].split(",")[i]) == rep.rows[0][i]


def test_line_plot_svg():
    svg = line_plot_svg({("a",): [(0, 0.0), (1, -1.0)], ("b",): [(0, 1.0), (1, 0.5)]}, "x", "y", "t")
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")
    assert 'stroke="#1f77b4"' in svg and 'stroke="#d62728"' in svg
