import json
import math

import numpy as np
import pytest
from click.testing import CliRunner

from multiport.cli import main, parse_arrangement
from multiport.linalg import random_unitary, save_matrix_file


@pytest.fixture
def runner():
    return CliRunner()


def _invoke(runner, args):
    return runner.invoke(main, args, catch_exceptions=False)


def test_parse_arrangement_forms():
    assert parse_arrangement("2,0,0,1").counts == (2, 0, 0, 1)
    assert parse_arrangement("d:1,1,4", 4).counts == (2, 0, 0, 1)
    assert parse_arrangement("d:", 3).counts == (0, 0, 0)


def test_distribution_json(runner):
    result = _invoke(runner, ["distribution", "--matrix", "fourier", "--n", "2",
                              "--input", "1,1", "--species", "boson"])
    assert result.exit_code == 0
    doc = json.loads(result.output)
    assert doc["matrix"] == "fourier:2"
    rows = {row["output"]: row["probability"] for row in doc["rows"]}
    assert rows["2,0"] == pytest.approx(0.5, abs=1e-12)
    assert rows["1,1"] == pytest.approx(0.0, abs=1e-12)
    assert rows["0,2"] == pytest.approx(0.5, abs=1e-12)
    assert doc["rows"][1]["law_suppressed"] is True


def test_distribution_multinomial(runner):
    result = _invoke(runner, ["distribution", "--n", "6", "--input", "1,1,1,1,1,1",
                              "--species", "distinguishable"])
    assert result.exit_code == 0
    doc = json.loads(result.output)
    for row in doc["rows"]:
        s = [int(t) for t in row["output"].split(",")]
        want = 720 / (6**6 * math.prod(math.factorial(c) for c in s))
        assert row["probability"] == pytest.approx(want, rel=1e-11)


def test_distribution_rejects_bad_fermion_input(runner):
    result = runner.invoke(main, ["distribution", "--n", "2", "--input", "2,0",
                                  "--species", "fermion"])
    assert result.exit_code == 2
    assert "at most one particle per mode" in result.output


def test_distribution_rejects_bad_arrangement(runner):
    result = runner.invoke(main, ["distribution", "--n", "2", "--input", "1,x"])
    assert result.exit_code == 2


def test_distribution_matrix_file(runner, tmp_path):
    u = random_unitary(3, 5)
    path = tmp_path / "u.json"
    save_matrix_file(u, path)
    result = _invoke(runner, ["distribution", "--matrix", str(path), "--input", "1,1,0"])
    assert result.exit_code == 0
    doc = json.loads(result.output)
    assert doc["matrix"] == f"file:{path}"
    total = sum(row["probability"] for row in doc["rows"])
    assert total == pytest.approx(1.0, abs=1e-9)


def test_distribution_matrix_file_parse_failure(runner, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{broken")
    result = runner.invoke(main, ["distribution", "--matrix", str(path), "--input", "1,1"])
    assert result.exit_code == 3


def test_distribution_rejects_non_unitary_file(runner, tmp_path):
    path = tmp_path / "nonunitary.json"
    path.write_text(json.dumps({"n": 2, "entries": [[2, 0], [0, 0], [0, 0], [2, 0]]}))
    result = runner.invoke(main, ["distribution", "--matrix", str(path), "--input", "1,1"])
    assert result.exit_code == 2


def test_distribution_deterministic_and_csv_json_match(runner, tmp_path):
    args = ["distribution", "--n", "4", "--input", "2,0,1,0", "--species", "boson"]
    out1 = _invoke(runner, args).output
    out2 = _invoke(runner, args).output
    assert out1 == out2  # byte-identical reruns
    doc = json.loads(out1)
    csv_text = _invoke(runner, args + ["--format", "csv"]).output
    lines = [ln for ln in csv_text.splitlines() if ln and not ln.startswith("#")]
    header, *body = lines
    assert header == "output,class_multiplicity,probability,enhancement,law_suppressed"
    assert len(body) == len(doc["rows"])
    for line, row in zip(body, doc["rows"]):
        out_s, mult, p, enh, law = line.rsplit(",", 4)
        assert out_s.strip('"') == row["output"]
        assert float(p) == row["probability"]  # identical numeric values
        if row["enhancement"] is None:
            assert enh == ""
        else:
            assert float(enh) == row["enhancement"]
        assert (law == "true") == row["law_suppressed"]


def test_distribution_group_by_class(runner):
    result = _invoke(runner, ["distribution", "--n", "6", "--input", "1,1,1,1,1,1",
                              "--species", "boson", "--group-by-class"])
    doc = json.loads(result.output)
    assert len(doc["rows"]) == 50
    assert sum(r["class_multiplicity"] for r in doc["rows"]) == 462


def test_enhancement_grid(runner):
    result = _invoke(runner, ["enhancement", "--n", "6", "--particles", "6",
                              "--species", "boson"])
    assert result.exit_code == 0
    doc = json.loads(result.output)
    assert len(doc["classes"]) == 50
    assert len(doc["cells"]) == 2500
    flat_rows = [c for c in doc["cells"] if c["input"] == "0,0,0,0,0,6"]
    assert flat_rows and all(abs(c["enhancement"] - 1.0) < 1e-6 for c in flat_rows)
    tags = {c["tag"] for c in doc["cells"]}
    assert {"predicted_zero", "unpredicted_zero", "nonzero"} <= tags


def test_enhancement_fermion_needs_pauli(runner):
    result = runner.invoke(main, ["enhancement", "--n", "6", "--particles", "3",
                                  "--species", "fermion"])
    assert result.exit_code == 2
    result = _invoke(runner, ["enhancement", "--n", "6", "--particles", "3",
                              "--species", "fermion", "--pauli"])
    assert result.exit_code == 0


def test_suppression_single(runner):
    result = _invoke(runner, ["suppression", "--n", "6", "--input", "0,1,2,0,1,2",
                              "--output", "0,2,0,2,0,2", "--species", "boson", "--check"])
    assert result.exit_code == 0
    doc = json.loads(result.output)
    entry = doc["results"][0]
    assert entry["suppressed_by_law"] is True
    assert entry["direction"] == "reverse"
    assert entry["q"] == 2
    assert entry["probability"] < 1e-12
    assert entry["sound"] is True


def test_suppression_two_modes(runner):
    result = _invoke(runner, ["suppression", "--n", "2", "--input", "1,1",
                              "--output", "1,1", "--species", "boson"])
    doc = json.loads(result.output)
    assert doc["results"][0]["suppressed_by_law"] is True
    assert doc["results"][0]["q"] == 1


def test_suppression_aperiodic_not_applicable(runner):
    result = _invoke(runner, ["suppression", "--n", "6", "--input", "2,1,0,5,0,2",
                              "--output", "2,1,0,5,0,2", "--species", "boson"])
    doc = json.loads(result.output)
    entry = doc["results"][0]
    assert entry["suppressed_by_law"] is False
    assert entry["applicable"] is False
    assert entry["p"] == 1


def test_suppression_scan(runner):
    result = _invoke(runner, ["suppression", "--n", "4", "--input", "1,0,1,0",
                              "--species", "boson", "--check"])
    doc = json.loads(result.output)
    assert len(doc["results"]) == 10  # all outputs of 2 particles in 4 modes
    assert all(entry["sound"] for entry in doc["results"])


def test_config_file_defaults(runner, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n": 2, "input": "1,1", "species": "boson"}))
    result = _invoke(runner, ["distribution", "--config", str(cfg)])
    assert result.exit_code == 0
    doc = json.loads(result.output)
    assert doc["input"] == "1,1"
    # explicit flags win over the config file
    result = _invoke(runner, ["distribution", "--config", str(cfg), "--species", "fermion"])
    assert json.loads(result.output)["species"] == "fermion"


def test_verify_numbers_suite(runner):
    result = _invoke(runner, ["verify", "--suite", "paper-numbers"])
    assert result.exit_code == 0
    assert "FAIL" not in result.output
    assert "inequivalent_class_counts" in result.output


def test_verify_negative_control(runner):
    result = runner.invoke(main, ["verify", "--suite", "paper-numbers",
                                  "--perturb-phase", "0.05"])
    assert result.exit_code == 1
    assert "FAIL" in result.output


def test_output_to_file(runner, tmp_path):
    out = tmp_path / "dist.json"
    result = _invoke(runner, ["distribution", "--n", "2", "--input", "1,1",
                              "--out", str(out)])
    assert result.exit_code == 0
    assert json.loads(out.read_text())["matrix"] == "fourier:2"
