import json

import numpy as np
import pytest

from nlew.cli import main
from nlew.linalg import matrix_to_json


def _write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


def test_detect_writes_csv_and_json(tmp_path, capsys):
    cfg = _write(
        tmp_path / "cfg.json",
        {"state": {"family": "rho_beta"}, "grid": {"beta": {"start": 0.7072, "stop": 1.0, "num": 30}}, "kinds": ["DV_L"]},
    )
    out = tmp_path / "out"
    assert main(["detect", "--config", cfg, "--out", str(out)]) == 0
    assert (out / "detect.csv").read_text().startswith("family,beta,ppt_class")
    obj = json.loads((out / "detect.json").read_text())
    assert obj["intervals"]
    assert "DV_L" in capsys.readouterr().out


def test_detect_seed_override_is_deterministic(tmp_path, capsys):
    cfg = _write(
        tmp_path / "cfg.json",
        {
            "state": {"family": "rho_x"},
            "witness": {"family": "wl_c"},
            "grid": {"x": [1.0, 2.0]},
            "kinds": ["WNL4"],
            "sep_max": "seesaw",
            "restarts": 4,
        },
    )
    main(["detect", "--config", cfg, "--seed", "9", "--format", "json"])
    first = capsys.readouterr().out
    main(["detect", "--config", cfg, "--seed", "9", "--format", "json"])
    assert capsys.readouterr().out == first


def test_certify_exit_codes(capsys):
    assert main(["certify", "--witness", "wl_p", "--param", "p=0.5", "--samples", "200"]) == 0
    assert json.loads(capsys.readouterr().out)["suspect"] is False
    assert main(["certify", "--witness", "wl_p", "--param", "p=-0.1", "--unchecked", "--samples", "200"]) == 1


def test_sepmax_witness_and_matrix(tmp_path, capsys):
    assert main(["sepmax", "--witness", "wl_p", "--param", "p=0.3", "--restarts", "8"]) == 0
    assert json.loads(capsys.readouterr().out)["max_value"] == pytest.approx((2 - 0.6 + 0.09) / 4)
    m = _write(tmp_path / "m.json", matrix_to_json(np.eye(4)))
    assert main(["sepmax", "--matrix", m, "--dims", "2,2", "--restarts", "4"]) == 0
    assert json.loads(capsys.readouterr().out)["max_value"] == pytest.approx(1)


def test_sepmax_cache(tmp_path, capsys):
    cache = tmp_path / "c.json"
    args = ["sepmax", "--witness", "wl_c", "--restarts", "4", "--cache", str(cache)]
    assert main(args) == 0 and cache.exists()
    assert main(args) == 0


def test_decompose(capsys):
    assert main(["decompose", "--witness", "wl_p", "--param", "p=0.5"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "basis_a,basis_b,coefficient"
    assert {tuple(line.split(",")[:2]) for line in lines[1:]} == {("I", "I"), ("X", "X"), ("Y", "Y")}
    assert main(["decompose", "--witness", "wl_c", "--square", "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out)["terms"]


def test_reproduce_subset(tmp_path, capsys):
    assert main(["reproduce", "--criteria", "2,8", "--out", str(tmp_path)]) == 0
    assert "ALL PASS" in (tmp_path / "reproduce.txt").read_text()
    assert json.loads((tmp_path / "reproduce.json").read_text())["passed"] is True


def test_reproduce_reports_failure():
    assert main(["reproduce", "--criteria", "11"]) == 1


@pytest.mark.parametrize(
    "argv",
    [
        ["detect"],
        ["detect", "--config", "/nonexistent.json"],
        ["certify"],
        ["certify", "--witness", "wl_p"],
        ["certify", "--witness", "wl_p", "--param", "p"],
        ["certify", "--witness", "wl_p", "--param", "p=abc"],
        ["certify", "--witness", "wl_c", "--unchecked"],
        ["sepmax", "--matrix", "x.json"],
        ["reproduce", "--criteria", "14"],
        ["reproduce", "--criteria", "a"],
        ["frobnicate"],
        [],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    assert main(argv) == 2


def test_bad_config_names_field(tmp_path, capsys):
    cfg = _write(tmp_path / "bad.json", {"state": {"family": "nope"}})
    assert main(["detect", "--config", cfg]) == 2
    assert "state.family" in capsys.readouterr().err
    (tmp_path / "broken.json").write_text("{")
    assert main(["detect", "--config", str(tmp_path / "broken.json")]) == 2


def test_help_exits_zero(capsys):
    assert main(["--help"]) == 0


def test_matrix_errors_exit_2(tmp_path, capsys):
    m = _write(tmp_path / "neg.json", matrix_to_json(-np.eye(4)))
    assert main(["sepmax", "--matrix", m, "--dims", "2,2"]) == 2
    assert main(["sepmax", "--matrix", m]) == 2
    assert main(["decompose", "--matrix", m, "--dims", "2,3"]) == 2
    assert main(["decompose", "--matrix", m, "--dims", "4,1"]) == 2
