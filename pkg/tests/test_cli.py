"""Command line surface: parsing, output formats, exit codes."""
import json

import numpy as np
import pytest

from orlicz_uat.cli import dispatch, parse_young_spec
from orlicz_uat.errors import ValidationError


def write_json(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


@pytest.fixture
def two_point(tmp_path):
    measure = write_json(tmp_path / "mu.json",
                         {"dim": 1, "points": [[0.0], [1.0]], "weights": [0.5, 0.5]})
    table = write_json(tmp_path / "f.json", {"values": [[1.0], [3.0]]})
    return measure, table


def test_parse_young_spec():
    assert parse_young_spec("power:2").p == 2.0
    phi = parse_young_spec("power:2:0.5")
    assert phi.p == 2.0 and phi.scale == 0.5
    assert parse_young_spec("entropy").kind == "entropy"
    assert parse_young_spec("exp_minus_linear").kind == "exp_minus_linear"
    with pytest.raises(ValidationError):
        parse_young_spec("power")
    with pytest.raises(ValidationError):
        parse_young_spec("weird:1")


def test_norm_command_csv(two_point, capsys):
    measure, table = two_point
    code = dispatch(["norm", "--phi", "power:2", "--measure", measure, "--f", table])
    out = capsys.readouterr().out
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "phi_kind,measure_id,norm_value,modular_at_value,iterations"
    cells = lines[1].split(",")
    assert cells[0] == "power:2"
    assert abs(float(cells[2]) - np.sqrt(5.0)) <= 1e-9
    assert float(cells[3]) <= 1.0


def test_norm_command_writes_file(two_point, tmp_path, capsys):
    measure, table = two_point
    out_file = tmp_path / "norm.csv"
    code = dispatch(["norm", "--phi", "power:2", "--measure", measure,
                     "--f", table, "--out", str(out_file)])
    assert code == 0
    assert capsys.readouterr().out == ""
    assert out_file.read_text().startswith("phi_kind,")


def test_norm_command_missing_file(tmp_path, capsys):
    table = write_json(tmp_path / "f.json", {"values": [[1.0]]})
    code = dispatch(["norm", "--phi", "power:2",
                     "--measure", str(tmp_path / "absent.json"), "--f", table])
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_norm_command_bad_phi(two_point, capsys):
    measure, table = two_point
    code = dispatch(["norm", "--phi", "power:0.5", "--measure", measure, "--f", table])
    assert code == 2


def test_conjugate_command(capsys):
    code = dispatch(["conjugate", "--phi", "power:2:0.5"])
    assert code == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["kind"] == "tabulated"
    grid = np.array(obj["grid"])
    values = np.array(obj["values"])
    # numeric conjugate of x^2/2 is y^2/2 at the grid nodes
    node = np.argmin(np.abs(grid - 1.0))
    assert abs(grid[node] - 1.0) <= 1e-12
    assert abs(values[node] - 0.5) <= 1e-6


def test_conjugate_command_custom_grid(capsys):
    code = dispatch(["conjugate", "--phi", "power:3:0.3333333333333333",
                     "--grid", "0.1:10:64"])
    assert code == 0
    obj = json.loads(capsys.readouterr().out)
    # the origin node is prepended to the requested 64 construction nodes
    grid = np.array(obj["grid"])[1:]
    values = np.array(obj["values"])[1:]
    assert grid.size == 64
    want = (np.abs(grid) ** 1.5) / 1.5
    assert float(np.max(np.abs(values - want) / np.maximum(1.0, want))) <= 1e-6


def test_conjugate_p1_exit_code(capsys):
    code = dispatch(["conjugate", "--phi", "power:1"])
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_construct_identity_and_bump(capsys):
    code = dispatch(["construct", "--what", "identity", "--offset", "10"])
    assert code == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["layer_count"] == 2
    assert obj["input_dim"] == 1 and obj["output_dim"] == 1

    code = dispatch(["construct", "--what", "bump", "--a", "0", "--b", "1",
                     "--delta", "0.5"])
    assert code == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["hidden_widths"] == [4]


def test_construct_box_and_register(tmp_path, capsys):
    code = dispatch(["construct", "--what", "box",
                     "--box", write_json(tmp_path / "J.json",
                                         {"lo": [0.0, 0.0], "hi": [1.0, 1.0]}),
                     "--delta", "0.5"])
    assert code == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["input_dim"] == 2 and obj["output_dim"] == 1

    net = {"input_dim": 1,
           "layers": [{"A": [[1.0], [-1.0]], "b": [0.0, 0.0], "act": "relu"},
                      {"A": [[1.0, -1.0]], "b": [0.0], "act": "none"}]}
    code = dispatch(["construct", "--what", "register",
                     "--net", write_json(tmp_path / "net.json", net),
                     "--box", write_json(tmp_path / "B.json",
                                         {"lo": [-2.0], "hi": [2.0]})])
    assert code == 0
    obj = json.loads(capsys.readouterr().out)
    assert all(w == 3 for w in obj["hidden_widths"])


def test_construct_clip(tmp_path, capsys):
    net = {"input_dim": 1,
           "layers": [{"A": [[1.0]], "b": [0.0], "act": "relu"},
                      {"A": [[1.0]], "b": [0.0], "act": "none"}]}
    code = dispatch(["construct", "--what", "clip",
                     "--net", write_json(tmp_path / "net.json", net),
                     "--box", write_json(tmp_path / "B.json",
                                         {"lo": [-3.0], "hi": [3.0]}),
                     "--inner-box", write_json(tmp_path / "J.json",
                                               {"lo": [0.0], "hi": [1.0]}),
                     "--delta", "0.25", "--clip-low", "-1", "--clip-high", "2"])
    assert code == 0
    obj = json.loads(capsys.readouterr().out)
    assert all(w == 3 for w in obj["hidden_widths"])


def test_construct_requires_flags(capsys):
    code = dispatch(["construct", "--what", "bump"])
    assert code == 2


def test_fit_command(tmp_path, capsys):
    measure = write_json(
        tmp_path / "mu.json",
        {"dim": 1,
         "points": [[x] for x in np.linspace(0.0, 1.0, 32)],
         "weights": [1.0 / 32] * 32})
    code = dispatch(["fit", "--target", "sin_product", "--measure", measure,
                     "--phi", "power:2", "--widths", "4,8", "--seeds", "0"])
    out = capsys.readouterr().out
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "width,seed,gauge_error,l1_error,fit_millis"
    assert len(lines) == 3
    assert all(line.endswith(",0") for line in lines[1:])


def test_robust_command(tmp_path, capsys):
    config = {
        "case": "i",
        "family": {"kind": "mixtures", "count": 2, "points": 64, "seed": 7,
                   "box": {"lo": [0.0], "hi": [1.0]}},
        "target": {"name": "sin_product", "dim": 1},
        "epsilon": 0.05,
        "widths": [8, 16],
        "seeds": 2,
    }
    code = dispatch(["robust", "--config", write_json(tmp_path / "cfg.json", config),
                     "--out-dir", str(tmp_path / "run")])
    out = capsys.readouterr().out
    assert code == 0
    assert out.startswith("success")
    assert (tmp_path / "run" / "report.json").exists()
    assert (tmp_path / "run" / "curve.csv").exists()
    assert (tmp_path / "run" / "network.json").exists()


def test_robust_command_hypothesis_exit_code(tmp_path, capsys):
    config = {
        "case": "i",
        "family": {"kind": "mixtures", "count": 1, "points": 16, "seed": 1,
                   "box": {"lo": [0.0], "hi": [1.0]}},
        "target": {"name": "sin_product", "dim": 1},
        "epsilon": 0.5,
        "widths": [4],
        "seeds": 1,
        "activation": "relu",
    }
    code = dispatch(["robust", "--config", write_json(tmp_path / "cfg.json", config),
                     "--out-dir", str(tmp_path / "run")])
    assert code == 3
    assert "bounded activation" in capsys.readouterr().err


def test_selftest_command(capsys):
    code = dispatch(["selftest"])
    out = capsys.readouterr().out
    assert code == 0
    assert "7/7 suites passed" in out
    assert out.count("ok   ") == 7
