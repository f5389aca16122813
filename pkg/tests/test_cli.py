import json
import subprocess
import sys

import pytest

from rectlimsup.cli import ReportBundle, config_from_text, emit_reports, run_experiment
from rectlimsup.cli.__main__ import main
from rectlimsup.exceptions import ValidationError

SHRINKING = """
[system]
kind = shrinking
d = 2
bases = 3, 3
digits = 0,2; 0,2
phi = u^-1

[task]
levels = 1-6
balls = full
seed = 0
"""

SERIES = """
[system]
kind = rational
d = 2
phi = u^-1

[task]
series = application
Q = 10000
"""

RATIONAL = """
[system]
kind = rational
d = 1
phi = u^-1
M = 16

[task]
levels = 2-3
seed = 0
"""


def write(tmp_path, text, name="exp.ini"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_shrinking_ubiquity_all_ones(tmp_path):
    cfg = write(tmp_path, SHRINKING)
    assert main(["ubiquity", "--config", str(cfg), "--out", str(tmp_path / "out")]) == 0
    lines = (tmp_path / "out" / "ubiquity.csv").read_text().splitlines()
    assert lines[0] == "ball_id,n,ratio,method,error"
    assert len(lines) == 7
    assert all(line.split(",")[2] == "1" for line in lines[1:])
    summary = json.loads((tmp_path / "out" / "summary.json").read_text())
    assert summary["summaries"]["ubiquity"]["min_ratio"] == 1.0
    assert summary["provenance"]["seed"] == 0


def test_series_task(tmp_path):
    cfg = write(tmp_path, SERIES)
    assert main(["series", "--config", str(cfg), "--out", str(tmp_path / "out")]) == 0
    lines = (tmp_path / "out" / "series.csv").read_text().splitlines()
    assert lines[0] == "N,partial_sum,last_term"
    assert lines[-1].startswith("10000,1.64483407185,")
    summary = json.loads((tmp_path / "out" / "summary.json").read_text())
    assert summary["summaries"]["series"]["label"] == "converging"


def test_rerun_is_byte_identical(tmp_path):
    cfg = write(tmp_path, RATIONAL)
    for d in ("a", "b"):
        assert main(["ubiquity", "--config", str(cfg), "--out", str(tmp_path / d)]) == 0
    assert (tmp_path / "a" / "ubiquity.csv").read_bytes() == (tmp_path / "b" / "ubiquity.csv").read_bytes()


def test_bad_digits_exit_code_and_field(tmp_path, capsys):
    cfg = write(tmp_path, SHRINKING.replace("digits = 0,2; 0,2", "digits = 0,5; 0,2"))
    assert main(["ubiquity", "--config", str(cfg), "--out", str(tmp_path / "out")]) == 2
    err = json.loads(capsys.readouterr().err)
    assert err["kind"] == "validation"
    assert [p["field"] for p in err["problems"]] == ["digits"]
    assert (tmp_path / "out" / "error.json").exists()


def test_missing_seed_for_statistical_task(tmp_path):
    cfg = write(tmp_path, RATIONAL.replace("seed = 0\n", ""))
    assert main(["ubiquity", "--config", str(cfg), "--out", str(tmp_path / "out")]) == 2
    assert main(["ubiquity", "--config", str(cfg), "--out", str(tmp_path / "out"), "--seed", "3"]) == 0


def test_size_cap_exit_code(tmp_path):
    cfg = write(tmp_path, RATIONAL.replace("levels = 2-3", "levels = 3\nmethod = exact\ncap = 10"))
    assert main(["ubiquity", "--config", str(cfg), "--out", str(tmp_path / "out")]) == 3


def test_missing_config_file(tmp_path):
    assert main(["series", "--config", str(tmp_path / "nope.ini"), "--out", str(tmp_path / "out")]) == 2


def test_unknown_key_is_reported():
    with pytest.raises(ValidationError) as e:
        config_from_text("[system]\nkind = rational\ncolour = red\n", task="series")
    assert "colour" in e.value.fields


def test_phi_and_Phi_are_distinct_keys():
    cfg = config_from_text("[system]\nkind = linear_forms\nh = 2\nphi = u^-2\nPhi = u\n", task="series")
    assert cfg.phi == ["u^-2"] and cfg.Phi == ["u"]


def test_empty_bundle_states_no_tasks(tmp_path):
    emit_reports(ReportBundle(), tmp_path)
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["tasks"] == "no tasks"


def test_measure_task_runs_in_process():
    cfg = config_from_text("[task]\nboxes = 0,0:1/2,1/2; 1/4,1/4:3/4,3/4\nseed = 1\nsamples = 20000\n",
                           task="measure")
    bundle = run_experiment(cfg)
    rows = bundle.tables["measure"].rows
    assert rows[0][0] == "exact-sweep" and rows[0][1] == 0.4375
    assert bundle.summaries["measure"]["exact"] == "7/16"


def test_console_script_module_entry(tmp_path):
    cfg = write(tmp_path, SERIES)
    proc = subprocess.run([sys.executable, "-m", "rectlimsup.cli", "series", "--config", str(cfg),
                           "--out", str(tmp_path / "o")], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert "series.csv" in proc.stdout
