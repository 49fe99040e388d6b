import json
import subprocess
import sys

import numpy as np
import pytest
from numpy.testing import assert_array_equal

from c4detect.cli import main
from c4detect.copula_gen import read_data_csv, read_labels_csv
from c4detect.stats_dist import mi_student_extra
from c4detect.sym_tensor import SymmetricTensor, cumulants_upto_4


@pytest.fixture
def generated(tmp_path):
    prefix = tmp_path / "ds"
    assert main(["gen", "--t", "300", "--n", "6", "--tau", "30", "--nu-c", "4",
                 "--seed", "7", "--out", str(prefix)]) == 0
    return prefix


def test_gen_default_sizes(tmp_path, capsys):
    prefix = tmp_path / "full"
    code = main(["gen", "--t", "1000", "--n", "30", "--tau", "100", "--nu-c", "6",
                 "--nu-u", "6", "--seed", "7", "--out", str(prefix)])
    assert code == 0
    paths = json.loads(capsys.readouterr().out)
    assert set(paths) == {"data", "labels", "meta"}
    assert read_labels_csv(paths["labels"]).sum() == 100
    assert read_data_csv(paths["data"]).shape == (1000, 30)
    meta = json.loads(open(paths["meta"]).read())
    assert meta["seed"] == 7 and len(meta["subset"]) == 15


def test_detect_c4(generated, capsys):
    assert main(["detect", "c4", f"{generated}_data.csv", "--beta", "2.5", "--r", "3"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["r"] == 3 and doc["beta"] == 2.5
    assert set(doc) == {"flagged", "beta", "r", "iterations"}


def test_detect_rx(generated, capsys, tmp_path):
    out = tmp_path / "rx.json"
    assert main(["detect", "rx", f"{generated}_data.csv", "--percentile", "0.9",
                 "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["percentile"] == 0.9 and len(doc["flagged"]) > 0
    assert main(["detect", "rx", f"{generated}_data.csv", "--threshold", "1e9"]) == 0
    assert json.loads(capsys.readouterr().out)["flagged"] == []


def test_roc_csv(generated, capsys):
    assert main(["roc", f"{generated}_data.csv", f"{generated}_labels.csv",
                 "--beta-grid", "2:3:0.5"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "beta,fpr,tpr"
    assert len(lines) == 5
    assert lines[-1].startswith("# auc,")
    auc = float(lines[-1].split(",")[1])
    assert 0 <= auc <= 1
    assert main(["roc", f"{generated}_data.csv", f"{generated}_labels.csv",
                 "--detector", "rx", "--beta-grid", "1,2"]) == 0


def test_roc_degenerate_labels(generated, tmp_path, capsys):
    zeros = tmp_path / "zeros.csv"
    np.savetxt(zeros, np.zeros(300, dtype=int), fmt="%d")
    assert main(["roc", f"{generated}_data.csv", str(zeros)]) == 2
    err = capsys.readouterr().err
    assert err.startswith("ERROR(data):")


def test_cumulants(generated, capsys):
    assert main(["cumulants", f"{generated}_data.csv", "--order", "3"]) == 0
    T = SymmetricTensor.from_json(capsys.readouterr().out)
    X = read_data_csv(f"{generated}_data.csv")
    assert_array_equal(T.values, cumulants_upto_4(X)[1].values)


def test_mi(tmp_path, capsys):
    assert main(["mi", "--nu", "6", "--n", "30"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc == {"i_sigma": 0.0, "i_nu_n": mi_student_extra(6, 30),
                   "total": mi_student_extra(6, 30)}
    sigma = tmp_path / "s.json"
    sigma.write_text(json.dumps([[1, 0.5], [0.5, 1]]))
    assert main(["mi", "--nu", "6", "--sigma", str(sigma)]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["i_sigma"] == pytest.approx(-0.5 * np.log(0.75))
    assert doc["total"] == doc["i_sigma"] + doc["i_nu_n"]
    assert main(["mi", "--nu", "6"]) == 1


def test_experiment_flags_and_config(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"t": 200, "tau": 20, "n": 6, "nu_c": 4, "r": 2,
                               "beta_grid": [2.0, 3.0], "seeds": [1]}))
    assert main(["experiment", "--config", str(cfg)]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["config"]["seeds"] == [1]
    assert main(["experiment", "--t", "200", "--tau", "20", "--n", "6", "--nu-c", "4",
                 "--beta-grid", "2:3:1", "--seeds", "2", "--seed", "10",
                 "--detector", "c4"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert [s["seed"] for s in rep["per_seed"]] == [10, 11]


def test_ingest(tmp_path, capsys):
    prices = tmp_path / "p.csv"
    prices.write_text("date,A,B\n2020-01-01,100,5\n2020-01-02,110,5\n")
    assert main(["ingest", str(prices)]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "A,B"
    assert float(out[1].split(",")[0]) == pytest.approx(np.log(1.1))
    prices.write_text("date,A\n2020-01-01,100\n2020-01-02,0\n")
    assert main(["ingest", str(prices)]) == 2
    assert "ERROR(data): row 3, column A" in capsys.readouterr().err


def test_usage_and_numeric_errors(tmp_path, capsys):
    assert main([]) == 1
    assert main(["detect", "c5", "x.csv"]) == 1
    assert capsys.readouterr().err.startswith("ERROR(usage):")
    assert main(["detect", "c4", str(tmp_path / "missing.csv")]) == 2
    assert capsys.readouterr().err.startswith("ERROR(data):")
    singular = tmp_path / "sing.csv"
    singular.write_text("m1,m2\n" + "\n".join(f"{k},{2 * k}" for k in range(10)))
    assert main(["detect", "c4", str(singular), "--r", "1"]) == 3
    assert capsys.readouterr().err.strip().startswith("ERROR(numeric):")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "c4detect", "mi", "--nu", "8", "--n", "3"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["i_nu_n"] == pytest.approx(mi_student_extra(8, 3))
