import json
import subprocess
import sys

import pytest

from planar_threshold.cli import main, parse_config
from planar_threshold.config import ConfigError, RunConfig, parse_p_values
from planar_threshold.montecarlo import CSV_FIELDS, results_from_csv


def test_default_grid_parses_to_4_by_7(tmp_path):
    cfg, verbose = parse_config(["--seed", "1"])
    assert cfg.distances == [8, 10, 12, 14]
    assert cfg.p_values == [0.010, 0.011, 0.012, 0.013, 0.014, 0.015, 0.016]
    assert not verbose


def test_p_range_is_inclusive_and_exact():
    assert parse_p_values("0.010:0.016:0.001")[-1] == 0.016
    assert parse_p_values("0.1:0.3:0.1") == [0.1, 0.2, 0.3]
    assert parse_p_values("0.01, 0.02") == [0.01, 0.02]
    for bad in ("0.1:0.2", "a:b:c", "0.1:0.2:0", "x"):
        with pytest.raises(ConfigError):
            parse_p_values(bad)


@pytest.mark.parametrize(
    "argv",
    [
        ["--trials", "10"],  # no seed
        ["--seed", "1", "--distances", "1,3"],
        ["--seed", "1", "--p", "0.5,1.2"],
        ["--seed", "1", "--trials", "0"],
        ["--seed", "-3"],
        ["--seed", "1", "--mode", "bogus"],
        ["--seed", "1", "--distances", "3,x"],
        ["--seed", "1", "--threads", "0"],
        ["--seed", "1", "--time-weight", "-1"],
    ],
)
def test_usage_errors_exit_1(argv, capsys):
    assert main(argv) == 1
    assert "error" in capsys.readouterr().err


def test_config_file_and_overrides(tmp_path):
    cfg_file = tmp_path / "run.json"
    cfg_file.write_text(json.dumps({"distances": [3, 5], "p_values": [0.01], "trials": 7, "seed": 4}))
    cfg, _ = parse_config(["--config", str(cfg_file), "--trials", "9"])
    assert (cfg.distances, cfg.trials, cfg.seed) == ([3, 5], 9, 4)
    # Round trip through JSON.
    assert RunConfig.from_dict(json.loads(cfg.to_json())) == cfg
    cfg_file.write_text(json.dumps({"seed": 1, "colour": "red"}))
    assert main(["--config", str(cfg_file)]) == 1
    cfg_file.write_text("{not json")
    assert main(["--config", str(cfg_file)]) == 1
    assert main(["--config", str(tmp_path / "missing.json")]) == 1


def test_sweep_writes_one_row_per_grid_point(tmp_path):
    out = tmp_path / "r.csv"
    code = main(
        ["--distances", "2,3,4,5", "--p", "0.000:0.012:0.002", "--trials", "20", "--seed", "3", "--output", str(out)]
    )
    assert code == 0
    text = out.read_text()
    assert text.splitlines()[0] == ",".join(CSV_FIELDS)
    rows = results_from_csv(text)
    assert len(rows) == 28
    assert all(r.seed == 3 and r.rounds == 2 * r.distance for r in rows)
    assert all(r.failures_any == 0 for r in rows if r.p == 0.0)


def test_json_to_stdout(capsys):
    assert main(["--distances", "2", "--p", "0.01", "--trials", "5", "--seed", "1", "--format", "json"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert rows[0]["distance"] == 2 and rows[0]["trials"] == 5


def test_threshold_mode_writes_report(tmp_path):
    out = tmp_path / "t.csv"
    argv = ["--mode", "threshold", "--distances", "3,5", "--p", "0.004,0.008,0.012,0.016", "--trials", "400"]
    assert main(argv + ["--seed", "2", "--output", str(out)]) == 0
    report = json.loads((tmp_path / "t.threshold.json").read_text())
    assert {"p_th", "nu", "stderr", "residuals", "seed"} <= set(report)
    assert 0.004 <= report["p_th"] <= 0.016
    assert report["seed"] == 2


def test_threshold_without_crossing_exits_2(tmp_path, capsys):
    argv = ["--mode", "threshold", "--distances", "3,5", "--p", "0.001,0.002,0.003", "--trials", "50", "--seed", "1"]
    assert main(argv + ["--output", str(tmp_path / "x.csv")]) == 2
    assert "threshold" in capsys.readouterr().err


def test_unwritable_output_exits_2(tmp_path, capsys):
    bad = tmp_path / "missing-dir" / "r.csv"
    assert main(["--distances", "2", "--p", "0.01", "--trials", "5", "--seed", "1", "--output", str(bad)]) == 2
    assert "cannot write" in capsys.readouterr().err
    assert not bad.parent.exists()


def test_debug_dumps(tmp_path):
    paths = {k: tmp_path / f"{k}.json" for k in ("layout", "graphs", "events")}
    argv = ["--distances", "3", "--p", "0.05", "--trials", "4", "--seed", "9", "--dump-trials", "2"]
    argv += ["--output", str(tmp_path / "r.csv")]
    argv += [f"--dump-{k}={v}" for k, v in paths.items()]
    assert main(argv) == 0
    layout = json.loads(paths["layout"].read_text())["3"]
    assert layout["distance"] == 3 and len(layout["stabilizers"]) == 12
    graphs = [json.loads(line) for line in paths["graphs"].read_text().splitlines()]
    assert len(graphs) == 2 * 2  # two trials, one graph per kind
    assert {g["kind"] for g in graphs} == {"star", "plaquette"}
    events = [json.loads(line) for line in paths["events"].read_text().splitlines()]
    assert all(e["trial"] in (0, 1) for e in events)


def test_selftest_passes(capsys):
    assert main(["--mode", "selftest"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines and all(line.startswith("[PASS]") for line in lines)


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "planar_threshold", "--distances", "2", "--p", "0.01", "--trials", "3", "--seed", "1"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.startswith("distance,p,rounds")
    help_proc = subprocess.run([sys.executable, "-m", "planar_threshold", "--help"], capture_output=True, text=True)
    assert help_proc.returncode == 0 and "--dump-graphs" in help_proc.stdout
