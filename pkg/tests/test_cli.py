import csv
import io
import json
import math
import subprocess
import sys

import pytest

from boseee.cli import CSV_COLUMNS, CSV_SCHEMA, main


def _run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def _csv(text):
    lines = text.splitlines()
    assert lines[0].startswith(f"# {CSV_SCHEMA}")
    rows = list(csv.reader(io.StringIO("\n".join(lines[1:]))))
    assert rows[0] == CSV_COLUMNS
    return rows[1:]


def test_entropy_both_methods_agree(capsys):
    code, out, _ = _run(capsys, "entropy", "--disp", "closed:alpha=1,beta=0.75", "--N", "12",
                        "--region", "belt:x,0,5", "--method", "both", "--no-timing")
    assert code == 0
    text, _, js = out.partition("{")
    rows = _csv(text)
    assert [r[3] for r in rows] == ["dense", "chain_decomposition"]
    assert float(rows[0][4]) == pytest.approx(float(rows[1][4]), rel=1e-9)
    assert all(r[7] == "" for r in rows)
    assert json.loads("{" + js)["max_dense_chain_difference"] < 1e-8


def test_belt_sweep_writes_fit(tmp_path, capsys):
    prefix = tmp_path / "run" / "ebl"
    code, _, _ = _run(capsys, "belt", "--d", "1", "--sweep-N", "64,128,256", "--ratio", "0.5",
                      "--method", "chains", "--out", str(prefix))
    assert code == 0
    rows = _csv(prefix.with_suffix(".csv").read_text())
    assert [int(r[1]) for r in rows] == [32, 64, 128]
    doc = json.loads(prefix.with_suffix(".json").read_text())
    assert doc["fit"]["c"] == pytest.approx(1 / 3, abs=1e-3)
    assert "threads" not in doc["spec"] and "out" not in doc["spec"]


def test_outputs_independent_of_threads(tmp_path, capsys):
    outs = []
    for t in ("1", "8"):
        prefix = tmp_path / f"t{t}"
        assert _run(capsys, "belt", "--disp", "closed:alpha=1,beta=0.75", "--sweep-N", "16,32,64",
                    "--ratio", "0.25", "--method", "chains", "--threads", t, "--no-timing",
                    "--out", str(prefix))[0] == 0
        outs.append((prefix.with_suffix(".csv").read_bytes(), prefix.with_suffix(".json").read_bytes()))
    assert outs[0] == outs[1]


def test_rerun_is_idempotent(tmp_path, capsys):
    prefix = tmp_path / "r"
    args = ["rect-bounds", "--N", "16", "--Lx", "8", "--Ly", "8", "--out", str(prefix)]
    _run(capsys, *args)
    first = prefix.with_suffix(".json").read_bytes()
    _run(capsys, *args)
    assert prefix.with_suffix(".json").read_bytes() == first
    doc = json.loads(first)
    names = {c["name"]: c for c in doc["checks"]}
    assert names["exact_upper"]["passed"] and names["exact_upper"]["binding"]
    assert not names["upper"]["binding"]  # N < 32


def test_ssa_and_gamma_json(capsys):
    code, out, _ = _run(capsys, "ssa", "--N", "8", "--A", "rect:0,0,4,5", "--B", "disk:4,4,2.5")
    assert code == 0
    assert json.loads(out)["ssa"]["holds"] is True
    code, out, _ = _run(capsys, "gamma", "--disp", "closed:alpha=1,beta=0.75", "--N", "32", "--L", "4,8,16")
    assert code == 0
    g = json.loads(out)["gamma"]
    # independent count of transverse lines crossing the surface at N = 32
    assert g["critical_chains"] == sum(
        0 <= 0.75 - math.sin((2 * n + 1) * math.pi / 64) ** 2 <= 1 for n in range(32)
    ) == 22
    assert g["predicted"] == pytest.approx(2 / 3 * g["critical_chains"] / 32)


def test_profile_csv_stdout(capsys):
    code, out, _ = _run(capsys, "profile", "--disp", "point", "--N", "16", "--L", "8")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["k_perp_index", "k_perp_value", "S_chain"]
    assert len(rows) == 17


def test_config_merge_flags_win(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"disp": "gapped:m=1", "N": 8, "region": "belt:x,0,3", "method": "dense"}))
    _, out_cfg, _ = _run(capsys, "entropy", "--config", str(cfg), "--no-timing")
    _, out_flag, _ = _run(capsys, "entropy", "--config", str(cfg), "--N", "10", "--no-timing")
    assert _csv(out_cfg)[0][0] == "8"
    assert _csv(out_flag)[0][0] == "10"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"colour": "red"}))
    code, _, err = _run(capsys, "entropy", "--config", str(bad))
    assert code == 2 and "colour" in err


def test_validation_lists_every_defect(capsys):
    code, _, err = _run(capsys, "entropy", "--N", "1", "--disp", "gapped:m=x", "--threads", "0")
    assert code == 2
    for flag in ("--N", "--disp", "--threads", "--region"):
        assert flag in err


@pytest.mark.parametrize("argv", [
    ["entropy", "--N", "65", "--region", "belt:x,0,3"],  # dense cap
    ["belt", "--N", "8", "--L", "8"],
    ["gamma", "--disp", "ebl", "--N", "16", "--L", "2,4,8"],
    ["gamma", "--disp", "closed:alpha=1,beta=2.5", "--N", "16", "--L", "2,4,8"],
    ["entropy", "--N", "8", "--region", "rect:0,0,2,2", "--method", "chains"],
    ["nonsense"],
])
def test_exit_code_2(capsys, argv):
    assert _run(capsys, *argv)[0] == 2


def test_exit_code_3_on_zero_mode(capsys):
    code, _, err = _run(capsys, "entropy", "--disp", "closed:alpha=1,beta=0.5", "--N", "3", "--region", "belt:x,0,1")
    assert code == 3
    assert "k=(1.0471975511965976, 1.0471975511965976)" in err


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "boseee", "--version"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.startswith("ee ")
