import json

import pytest

from conftest import F2, PENTAGON, ZxZ
from rdlab import Polynomial, rd_scan
from rdlab.cli import run, validate_config
from rdlab.errors import ConfigError
from rdlab.reports import read_csv, render


@pytest.fixture
def configs(tmp_path):
    paths = {}
    for name, cfg in {"f2": F2.config(), "pent": PENTAGON.config(), "zxz": ZxZ.config(),
                      "z": {"type": "weighted_abelian", "weights": [1]},
                      "half": {"type": "weighted_abelian", "weights": [1, 0.5]},
                      "dup": {"type": "graph_product", "vertices": 2, "edges": [[0, 1], [0, 1]],
                              "vertex_groups": [{"type": "free", "rank": 1}] * 2}}.items():
        p = tmp_path / f"{name}.json"
        p.write_text(json.dumps(cfg))
        paths[name] = str(p)
    return paths


def test_validate_config(configs):
    cfg = validate_config(configs["f2"])
    assert cfg.group == F2 and len(cfg.digest) == 64
    with pytest.raises(ConfigError, match="below 1"):
        validate_config(configs["half"])
    with pytest.raises(ConfigError, match="duplicate edge"):
        validate_config(configs["dup"])
    with pytest.raises(ConfigError):
        validate_config("/nonexistent/g.json")


def test_ball_command(configs, tmp_path):
    out = tmp_path / "ball.csv"
    assert run(["ball", "--group", configs["f2"], "--radius", "2", "--out", str(out)]) == 0
    meta, rows = read_csv(out.read_text())
    assert len(rows) == 17 and list(rows[0]) == ["element", "length"]
    assert meta["config_digest"] == validate_config(configs["f2"]).digest
    assert meta["cap"] == "10000000"


def test_counterexample_command(tmp_path):
    out = tmp_path / "demo.json"
    assert run(["counterexample", "--n", "3", "--poly", "0,0,1", "--out", str(out)]) == 0
    obj = json.loads(out.read_text())
    assert obj["verdict"] == "violates" and obj["ball_size"] == 4089 and obj["r"] == 42
    assert obj["meta"]["max_points"] == 3_000_000


def test_counterexample_precondition_exit_1(capsys):
    assert run(["counterexample", "--n", "1", "--poly", "0,0,1"]) == 1
    err = capsys.readouterr().err
    assert err.count("\n") == 1 and "deg P" in err


def test_rd_scan_r0(configs, capsys):
    assert run(["rd-scan", "--group", configs["f2"], "--rmax", "0", "--sampler", "ball"]) == 0
    meta, rows = read_csv(capsys.readouterr().out)
    assert rows == [{"r": "0", "sampler": "ball", "max_ratio": "1.0", "bound": "", "pass": ""}]
    assert meta["seed"] == "0"


def test_rd_scan_bound_failure_exit_1(configs, tmp_path):
    out = tmp_path / "s.csv"
    code = run(["rd-scan", "--group", configs["f2"], "--rmax", "2", "--sampler", "ball",
                "--poly", "1", "--out", str(out)])
    assert code == 1
    _, rows = read_csv(out.read_text())
    assert [r["pass"] for r in rows] == ["true", "false", "false"]


def test_same_seed_byte_identical(configs, tmp_path):
    args = ["rd-scan", "--group", configs["pent"], "--rmax", "4", "--sampler", "random-weighted",
            "--sampler", "random-subset", "--trials", "20", "--seed", "5"]
    one, two = tmp_path / "1.csv", tmp_path / "2.csv"
    assert run(args + ["--out", str(one)]) == 0
    assert run(args + ["--out", str(two)]) == 0
    assert one.read_bytes() == two.read_bytes()
    three = tmp_path / "3.csv"
    run(args[:-1] + ["6", "--out", str(three)])
    assert three.read_bytes() != one.read_bytes()


def test_malformed_config_exit_2(configs, capsys):
    assert run(["ball", "--group", configs["half"], "--radius", "1"]) == 2
    err = capsys.readouterr().err
    assert err.count("\n") == 1 and "below 1" in err


def test_usage_errors_exit_2(configs):
    assert run(["nope"]) == 2
    assert run(["ball", "--group", configs["f2"]]) == 2
    assert run(["ball", "--group", configs["f2"], "--radius", "-1"]) == 2
    assert run(["rd-scan", "--group", configs["f2"], "--rmax", "1", "--poly", "1,-1"]) == 2


def test_budget_exit_2(configs, capsys):
    assert run(["ball", "--group", configs["f2"], "--radius", "9", "--cap", "100"]) == 2
    assert "cap of 100" in capsys.readouterr().err


def test_threads_env(configs, monkeypatch):
    monkeypatch.setenv("RD_LAB_THREADS", "zero")
    assert run(["ball", "--group", configs["f2"], "--radius", "1"]) == 2
    monkeypatch.setenv("RD_LAB_THREADS", "4")
    assert run(["ball", "--group", configs["f2"], "--radius", "1", "--out", "-"]) == 0


def test_conv_command(configs, capsys):
    assert run(["conv", "--group", configs["f2"], "--phi", "sphere:1", "--psi", "sphere:1"]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["rd_ratio"] == 1.75 and len(obj["entries"]) == 13


def test_conv_from_json_file(configs, tmp_path, capsys):
    f = tmp_path / "phi.json"
    f.write_text(json.dumps({"entries": [{"element": "a1", "value": 2.0}]}))
    assert run(["conv", "--group", configs["f2"], "--phi", str(f), "--psi", "delta:a2"]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["entries"] == [{"element": "a1 a2", "value": 2.0}]


def test_centroid_check(configs, capsys):
    assert run(["centroid-check", "--group", configs["f2"], "--elements-radius", "2",
                "--radius", "2", "--truncation", "4"]) == 0
    _, rows = read_csv(capsys.readouterr().out)
    assert len(rows) == 3 * 17 and all(r["pass"] == "true" for r in rows)
    assert run(["centroid-check", "--group", configs["zxz"], "--elements-radius", "2",
                "--radius", "2", "--truncation", "3"]) == 0
    assert run(["centroid-check", "--group", configs["pent"], "--elements-radius", "1",
                "--radius", "1", "--truncation", "2"]) == 2


def test_rc_check(configs, capsys):
    assert run(["rc-check", "--group", configs["pent"], "--elements-radius", "2",
                "--radius", "2", "--pairs", "100", "--mode", "rc1"]) == 0
    _, rows = read_csv(capsys.readouterr().out)
    assert rows[-1]["mode"] == "rc4" and rows[-1]["count"] == "0"
    assert run(["rc-check", "--group", configs["f2"], "--elements-radius", "1",
                "--radius", "1"]) == 2


def test_expansion_command(configs, capsys):
    assert run(["expansion", "--group", configs["z"], "--S", "elements:0;1",
                "--X", "elements:0;1", "--poly", "1,1"]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert (obj["S"], obj["X"], obj["SX"], obj["bound"], obj["verdict"]) == (2, 2, 3, 2.0,
                                                                            "satisfies")
    assert run(["expansion", "--group", configs["z"], "--S", "ball:1", "--X", "cube:3",
                "--poly", "1"]) == 0


def test_opnorm_command(configs, capsys):
    assert run(["opnorm", "--group", configs["z"], "--phi", "elements:-1;1", "--window", "5",
                "--window", "20", "--max-iters", "20000", "--tol", "1e-13"]) == 0
    _, rows = read_csv(capsys.readouterr().out)
    vals = [float(r["estimate"]) for r in rows]
    assert vals == sorted(vals) and all(2 ** 0.5 <= v <= 2 for v in vals)


def test_scan_csv_schema():
    rep = rd_scan(F2, 1, ["sphere"], bound=Polynomial((1, 1)))
    text = render(rep, "csv", {"seed": 0})
    assert text.splitlines()[1] == "r,sampler,max_ratio,bound,pass"
    assert render(rep, "csv", {"seed": 0}) == text


def test_atomic_write_leaves_no_temp_files(configs, tmp_path):
    out = tmp_path / "b.csv"
    run(["ball", "--group", configs["f2"], "--radius", "1", "--out", str(out)])
    assert sorted(p.name for p in tmp_path.iterdir() if p.name.startswith(".")) == []
