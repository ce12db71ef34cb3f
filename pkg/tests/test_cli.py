import json
import subprocess
import sys

import pytest

from maninlab.cli import main
from maninlab.varieties import builtin_dp6a2


def run_cli(args, tmp_path, name="out.json"):
    out = tmp_path / name
    code = main(list(args) + ["--out", str(out)])
    data = json.loads(out.read_text()) if out.exists() else None
    return code, data


def test_fan_subcommand(tmp_path):
    code, data = run_cli(["fan", "--n", "4", "--check", "all"], tmp_path)
    assert code == 0
    assert data["schema"] == 1
    assert data["all_pass"] is True
    assert set(data["certificates"]) == {
        "simplicial", "smooth", "complete", "separated", "projective"}


def test_local_check_subcommand(tmp_path):
    code, data = run_cli(["local-check", "--variety", "xn:3", "--q", "2,3"], tmp_path)
    assert code == 0
    rows = data["identities"]
    assert [r["q"] for r in rows] == [2, 3]
    assert rows[0]["L1"] == [13, 64]
    assert all(r["pass"] for r in rows)


def test_zeta_subcommand(tmp_path):
    code, data = run_cli(["zeta", "--variety", "xn:3", "--q", "3",
                          "--m-max", "2", "--euler-bound", "3"], tmp_path)
    assert code == 0
    rows = data["tables"][0]["rows"]
    assert len(rows) == 3
    assert {"m", "N", "main_term_num", "main_term_den", "complete"} <= set(rows[0])


def test_usage_errors():
    assert main(["unknown-command"]) == 2
    assert main(["local-check", "--variety", "xn:3", "--q", "6"]) == 2
    assert main(["points", "--variety", "/nonexistent.json", "--q", "2"]) == 2


def test_exit_code_one_on_check_failure(tmp_path):
    # an explicit (wrong) incidence list breaks the local identity
    dp = builtin_dp6a2()
    blob = dp.json_dict()
    blob["incidence"] = {"provenance": "external",
                         "rlv": [sorted(dp.vars)]}   # only the full support
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(blob))
    code, data = run_cli(["local-check", "--variety", str(path), "--q", "2"], tmp_path)
    assert code == 1
    assert data["all_pass"] is False


def test_cap_exceeded_reports_with_exit_zero(tmp_path):
    # a capped lifting check is incomplete, not failed
    code, data = run_cli(["lifting-check", "--variety", "xn:3", "--q", "3",
                          "--m-max", "4", "--cap", "10"], tmp_path)
    assert code == 0
    assert any(not r["complete"] and r["equal"] is None for r in data["rows"])
    # brute point counting over the cap is reported inside the JSON, exit 0
    code, data = run_cli(["points", "--variety", "xn:4", "--q", "11",
                          "--method", "brute"], tmp_path)
    assert code == 0
    assert "error" in data["counts"][0]["by_method"]["brute"]
    assert data["counts"][0]["methods_agree"] is None


def test_byte_identical_reports(tmp_path):
    _, _ = run_cli(["mu", "--variety", "dp6a2"], tmp_path, "a.json")
    _, _ = run_cli(["mu", "--variety", "dp6a2"], tmp_path, "b.json")
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


def _walk_no_floats(obj, path="root"):
    if isinstance(obj, float):
        raise AssertionError(f"float at {path}")
    if isinstance(obj, dict):
        for k, v in obj.items():
            _walk_no_floats(v, f"{path}.{k}")
    if isinstance(obj, list):
        for i, v in enumerate(obj):
            _walk_no_floats(v, f"{path}[{i}]")


@pytest.mark.parametrize("args", [
    ["fan", "--n", "3"],
    ["mu", "--variety", "xn:3"],
    ["series", "--variety", "dp6a2", "--box", "5"],
    ["alpha", "--variety", "xn:3"],
    ["points", "--variety", "xn:3", "--q", "2,3", "--euler-bound", "3"],
    ["local-check", "--variety", "dp6a2", "--q", "2"],
    ["count-curves", "--variety", "xn:3", "--q", "2", "--m-max", "2"],
    ["lifting-check", "--variety", "xn:3", "--q", "2", "--m-max", "2"],
])
def test_reports_contain_no_floats(args, tmp_path):
    code, data = run_cli(args, tmp_path)
    assert code == 0
    _walk_no_floats(data)


def test_console_entry_point(tmp_path):
    out = tmp_path / "cli.json"
    proc = subprocess.run(
        [sys.executable, "-m", "maninlab.cli", "alpha", "--variety", "xn:3",
         "--out", str(out)],
        capture_output=True, text=True)
    assert proc.returncode == 0
    data = json.loads(out.read_text())
    assert data["alpha"] == [1, 24]
    assert data["delta"] == 1


def test_threads_env_does_not_change_output(tmp_path, monkeypatch):
    monkeypatch.setenv("MANINLAB_THREADS", "4")
    _, _ = run_cli(["local-check", "--variety", "xn:3", "--q", "2,3,4"],
                   tmp_path, "t4.json")
    monkeypatch.setenv("MANINLAB_THREADS", "1")
    _, _ = run_cli(["local-check", "--variety", "xn:3", "--q", "2,3,4"],
                   tmp_path, "t1.json")
    assert (tmp_path / "t4.json").read_bytes() == (tmp_path / "t1.json").read_bytes()
