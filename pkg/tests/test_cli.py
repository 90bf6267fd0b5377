import json
import subprocess
import sys

import pytest

from gl2sums.cli import main


def run_cli(*argv, env_extra=None):
    import os

    env = dict(os.environ)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        [sys.executable, "-m", "gl2sums.cli", *argv],
        capture_output=True,
        text=True,
        env=env,
    )


def test_gauss_sum_closed_example(capsys):
    code = main(["gauss-sum", "--p", "3", "--rep", "st", "--matrix", "0,1;0,0",
                 "--method", "closed"])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["value"] == {"re": 18.0, "im": 0.0}
    assert payload["method"] == "closed"
    assert "elapsed_ms" in payload


def test_gauss_sum_methods_agree(capsys):
    values = {}
    for method in ("closed", "brute", "cells"):
        assert main(["gauss-sum", "--p", "5", "--rep", "principal:0,2",
                     "--matrix", "1,0;0,0", "--method", method]) == 0
        values[method] = json.loads(capsys.readouterr().out)["value"]
    assert values["closed"]["re"] == pytest.approx(values["brute"]["re"], abs=1e-6)
    assert values["closed"]["re"] == pytest.approx(values["cells"]["re"], abs=1e-6)


def test_count_example(capsys):
    assert main(["count", "--p", "3", "--x", "1", "--set", "primitive"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["exact_count"] == 12
    assert payload["set"] == "primitive"


def test_count_compare_and_class(capsys):
    assert main(["count", "--p", "5", "--x", "3", "--set", "disc-zero",
                 "--compare"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["exact_count"] == payload["enumeration_count"]
    assert main(["count", "--p", "5", "--x", "2", "--set", "class:central:1"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["exact_count"] >= 1


def test_char_table_payload(capsys):
    assert main(["char-table", "--p", "3"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["p"] == 3
    assert len(payload["irreps"]) == 8
    assert len(payload["classes"]) == 8
    assert len(payload["values"]) == 64
    assert sum(i["dim"] ** 2 for i in payload["irreps"]) == 48
    assert sum(c["size"] for c in payload["classes"]) == 48


def test_pv_scan_csv(capsys):
    assert main(["pv-scan", "--p", "11", "--xmax", "2", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "p,irrep_kind,irrep_params,dim,x,abs_sum,ratio"
    assert len(lines) == 1 + 2 * 119
    assert main(["pv-scan", "--p", "11", "--xmax", "2", "--out", "csv"]) == 0
    lines2 = capsys.readouterr().out.strip().splitlines()
    assert lines2 == lines


def test_pv_scan_xmax_guard():
    result = run_cli("pv-scan", "--p", "11", "--xmax", "11")
    assert result.returncode == 2
    assert "xmax" in result.stderr


def test_fourier_coeffs(capsys):
    assert main(["fourier-coeffs", "--p", "3"]) == 0
    payload = json.loads(capsys.readouterr().out)
    by_kind = {(e["kind"], tuple(e["params"])): e["value"] for e in payload["coefficients"]}
    assert by_kind[("onedim", (0,))] == 0.25
    assert by_kind[("steinberg", (0,))] == -0.25
    assert payload["family_abs_sums"]["cuspidal"] == 0.0


def test_ps_count(capsys):
    assert main(["ps-count", "--p", "3", "--x", "2", "--theta", "0,1",
                 "--scan"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["count"] >= 0
    assert payload["scan_max"] > 0


def test_verify_p3():
    result = run_cli("verify", "--p", "3")
    assert result.returncode == 0
    lines = result.stdout.strip().splitlines()
    assert all(line.startswith("PASS") for line in lines)
    assert any("singular-gauss" in line for line in lines)


def test_verify_single_check(capsys):
    assert main(["verify", "--p", "5", "--check", "gauss-magnitude"]) == 0
    out = capsys.readouterr().out
    assert "PASS gauss-magnitude" in out


def test_usage_errors_exit_2():
    assert run_cli("count", "--p", "4", "--x", "1", "--set", "elliptic").returncode == 2
    assert run_cli("count", "--p", "5", "--x", "1", "--set", "nope").returncode == 2
    assert run_cli("gauss-sum", "--p", "5", "--rep", "st", "--matrix", "1;2").returncode == 2
    assert run_cli("gauss-sum", "--p", "5", "--rep", "wat:9", "--matrix",
                   "1,0;0,1").returncode == 2


def test_deterministic_output():
    a = run_cli("char-table", "--p", "5")
    b = run_cli("char-table", "--p", "5")
    assert a.stdout == b.stdout and a.returncode == 0
    a = run_cli("count", "--p", "7", "--x", "9", "--set", "elliptic")
    b = run_cli("count", "--p", "7", "--x", "9", "--set", "elliptic")
    assert a.stdout == b.stdout
    a = run_cli("pv-scan", "--p", "11", "--xmax", "3", "--format", "csv")
    b = run_cli("pv-scan", "--p", "11", "--xmax", "3", "--format", "csv")
    assert a.stdout == b.stdout


def test_workers_env_override():
    base = run_cli("gauss-sum", "--p", "5", "--rep", "cuspidal:1",
                   "--matrix", "1,2;3,4", "--method", "brute")
    multi = run_cli("gauss-sum", "--p", "5", "--rep", "cuspidal:1",
                    "--matrix", "1,2;3,4", "--method", "brute",
                    env_extra={"GL2_WORKERS": "2"})
    assert base.returncode == multi.returncode == 0
    v1 = json.loads(base.stdout)["value"]
    v2 = json.loads(multi.stdout)["value"]
    # partial sums combine in a different order across workers: tolerance, not bytes
    assert complex(v1["re"], v1["im"]) == pytest.approx(
        complex(v2["re"], v2["im"]), abs=1e-9
    )


def test_out_file(tmp_path, capsys):
    path = tmp_path / "table.json"
    assert main(["count", "--p", "3", "--x", "1", "--set", "elliptic",
                 "--out", str(path)]) == 0
    payload = json.loads(path.read_text())
    assert payload["exact_count"] == 18
