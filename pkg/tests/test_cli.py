import csv
import io
import json

import pytest

from roytest import __version__
from roytest.cli import main, parse_grid


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cdf_table(capsys):
    code, out, _ = _run(capsys, "cdf", "--m", "5", "--n", "8", "--p", "10", "--omega", "2",
                        "--t-grid", "0.1:20:100", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 100
    vals = [float(r["cdf"]) for r in rows]
    assert vals == sorted(vals) and 0 <= vals[0] and vals[-1] <= 1
    # 17 significant digits
    assert len(rows[50]["cdf"].replace(".", "").lstrip("0").split("e")[0]) >= 15


def test_output_file_gets_manifest(tmp_path, capsys):
    out = tmp_path / "roc.csv"
    code, _, _ = _run(capsys, "roc", "--m", "4", "--n", "8", "--p", "10", "--omega", "2",
                      "--logit", "7", "--out", str(out))
    assert code == 0
    manifest = json.loads((tmp_path / "roc.csv.manifest.json").read_text())
    assert manifest["version"] == __version__
    assert manifest["params"]["omega"] == 2.0 and manifest["outputs"] == [str(out)]
    assert out.read_text().startswith("pf,pd,threshold")


def test_quantile_and_json(capsys):
    code, out, _ = _run(capsys, "quantile", "--m", "2", "--n", "3", "--p", "4", "--q", "0.5",
                        "--format", "json")
    assert code == 0 and 0 < json.loads(out)["quantile"]


def test_asympt(capsys):
    code, out, _ = _run(capsys, "asympt", "--c1", "0.25", "--c2", "0.5", "--gamma", "5",
                        "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["xi"] == 15.75 and abs(doc["gamma_p"] - 2.581) < 1e-3
    code, out, _ = _run(capsys, "asympt", "--c1", "0.25", "--c2", "0.5", "--gamma", "5",
                        "--m", "100", "--pf-grid", "0.01:0.5:4")
    assert code == 0 and len(out.splitlines()) == 5


def test_highdim_regime(capsys):
    code, out, _ = _run(capsys, "roc", "--m", "100", "--n", "200", "--p", "400",
                        "--omega", "2000", "--regime", "highdim", "--logit", "3")
    assert code == 0 and len(out.splitlines()) == 4


def test_simulate_is_deterministic(capsys, tmp_path):
    args = ["simulate", "samples", "--m", "2", "--n", "3", "--p", "4", "--omega", "1",
            "--trials", "200", "--seed", "9"]
    _, first, _ = _run(capsys, *args)
    _, second, _ = _run(capsys, *args)
    assert first == second and len(first.splitlines()) == 201
    config = tmp_path / "model.json"
    config.write_text(json.dumps({"m": 2, "n": 3, "p": 4, "omega": 1.0}))
    _, third, _ = _run(capsys, "simulate", "samples", "--config", str(config),
                       "--trials", "200", "--seed", "9")
    assert third == first
    code, out, _ = _run(capsys, "simulate", "roc", "--m", "2", "--n", "3", "--p", "4",
                        "--omega", "1", "--trials", "500", "--logit", "5")
    assert code == 0 and len(out.splitlines()) == 6


def test_validate_series(capsys):
    code, out, _ = _run(capsys, "validate", "--identity", "series")
    assert code == 0 and out.startswith("PASS")


def test_errors_are_actionable(capsys):
    code, _, err = _run(capsys, "roc", "--m", "4", "--n", "4", "--p", "10", "--regime", "highdim")
    assert code == 2 and "c2 = 1" in err
    code, _, err = _run(capsys, "simulate", "samples", "--trials", "200")
    assert code == 2 and "--m" in err
    with pytest.raises(SystemExit):
        main(["cdf", "--m", "2", "--n", "3", "--p", "4", "--t-grid", "1:0:3"])
    with pytest.raises(SystemExit):
        main(["cdf", "--m", "2", "--n", "3", "--p", "4", "--t-grid", "1:2:3", "--bogus"])


def test_grid_parser():
    g = parse_grid("0:1:5")
    assert list(g) == [0.0, 0.25, 0.5, 0.75, 1.0]


def test_validate_all_passes(capsys):
    code, out, _ = _run(capsys, "validate", "--suite", "all", "--seed", "42")
    assert code == 0, out
    assert out.count("PASS") == 5
