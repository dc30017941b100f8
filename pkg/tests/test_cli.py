import csv
import json

import pytest

from oqhlab.cli import main


def read_csv(path):
    with open(path) as fh:
        return list(csv.reader(fh))


def test_experiment_pass(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"name": "gauss-law", "seed": 1, "options": {"Q_max": 40}}))
    assert main(["experiment", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 0
    assert "PASS" in capsys.readouterr().out
    assert (tmp_path / "o" / "gauss-law.csv").exists()
    assert (tmp_path / "o" / "gauss-law.json").exists()


def test_experiment_no_svg(tmp_path):
    assert main(["experiment", "--name", "closed-form", "--out", str(tmp_path), "--no-svg"]) == 0
    assert not (tmp_path / "closed-form.svg").exists()


def test_experiment_unknown_name(tmp_path, capsys):
    assert main(["experiment", "--name", "bogus", "--out", str(tmp_path)]) == 2
    err = capsys.readouterr().err
    assert "gauss-law" in err and "sparse-ratio" in err


def test_experiment_bad_config(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"name": "gauss-law", "seed": 1, "j_range": [1, 40]}))
    assert main(["experiment", "--config", str(cfg), "--out", str(tmp_path)]) == 2


def test_experiment_failing_check_exit_1(tmp_path, capsys):
    # decay slopes of Gauss level maxima fall short of the -1/2 threshold at these levels
    assert main(["experiment", "--name", "gauss-decay", "--out", str(tmp_path)]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_transform(tmp_path):
    sig = tmp_path / "f.json"
    sig.write_text(json.dumps({"offset": 0, "re": [1.0, 0.0, -1.0], "im": [0.0, 0.0, 0.0]}))
    assert main(["transform", "--alpha", "1/2", "--signal", str(sig), "--window", "-4", "6",
                 "--out", str(tmp_path)]) == 0
    rows = read_csv(tmp_path / "transform.csv")
    assert rows[0] == ["n", "re", "im"] and len(rows) == 12


def test_multiplier(tmp_path, capsys):
    assert main(["multiplier", "--alpha", "golden-1", "--j", "6", "--what", "Ej", "--out", str(tmp_path)]) == 0
    summary = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert summary["grid"] == 512 and summary["sup"] >= 0
    assert len(read_csv(tmp_path / "multiplier_Ej.csv")) == 513


def test_gauss(tmp_path):
    assert main(["gauss", "--Q", "5", "--out", str(tmp_path)]) == 0
    rows = read_csv(tmp_path / "gauss.csv")
    assert rows[0] == ["s", "Q", "A", "B", "abs_S", "arg_S"]
    assert len(rows) == 1 + 4 * 5
    assert all(abs(float(r[4]) - 5 ** -0.5) < 1e-12 for r in rows[1:])


def test_gauss_levels(tmp_path, capsys):
    assert main(["gauss", "--level", "1", "2", "--out", str(tmp_path)]) == 0
    assert len(read_csv(tmp_path / "gauss_levels.csv")) == 3


def _collection(tmp_path, witness):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"rho": 0.5, "entries": [{"interval": [0, 3], "witness": witness}]}))
    return p


def test_sparse_check_ok(tmp_path, capsys):
    assert main(["sparse-check", str(_collection(tmp_path, [0, 1, 2])), "--out", str(tmp_path)]) == 0
    assert json.loads(capsys.readouterr().out)["sparse"] is True


def test_sparse_check_fails(tmp_path, capsys):
    assert main(["sparse-check", str(_collection(tmp_path, [0, 1])), "--out", str(tmp_path)]) == 1
    out = json.loads(capsys.readouterr().out)
    assert out["sparse"] is False and out["entry"] == 0


def test_sparse_check_missing_file(tmp_path):
    assert main(["sparse-check", "--out", str(tmp_path)]) == 2


def test_sparse_ratio(tmp_path):
    assert main(["sparse-ratio", "--alpha-set", "0", "1/2", "--N", "64", "128", "--count", "5",
                 "--out", str(tmp_path)]) == 0
    rows = read_csv(tmp_path / "sparse-ratio.csv")
    assert len(rows) > 1


def test_weights_characteristics(tmp_path):
    assert main(["weights", "--exponent", "0", "0.3", "--N", "256", "--only-characteristics",
                 "--out", str(tmp_path)]) == 0
    rows = read_csv(tmp_path / "weights.csv")
    assert rows[0] == ["N", "spec", "a2", "a2_inv", "rh", "rh_inv"]
    assert float(rows[1][2]) == pytest.approx(1.0)
