import csv
import io
import json
import subprocess
import sys

import pytest

from zetapfrac.cli import main
from conftest import cache_file


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_expansion_default_points(cli_env, capsys):
    code, out, _ = run(capsys, "verify-expansion")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["region"] for r in rows] == ["real:0", "exterior", "exterior", "exterior"]
    for r in rows:
        assert float(r["delta_abs"]) <= float(r["tail_budget"])
    assert complex(rows[0]["f"]) == pytest.approx(0.9172726357535285)


def test_verify_json_and_point(cli_env, capsys):
    code, out, _ = run(capsys, "verify-expansion", "--s", "2,0", "--format", "json")
    rows = json.loads(out)
    assert code == 0 and len(rows) == 1 and float(rows[0]["delta_abs"]) < 1e-3


def test_coeffs(cli_env, capsys):
    code, out, _ = run(capsys, "coeffs", "--W", "3", "--n", "10", "--format", "json")
    data = json.loads(out)
    assert code == 0 and len(data["c_real"]) == 3 and len(data["c_imag"]) == 10
    assert data["c0"] == pytest.approx(1.2806138876102734)
    code, out, _ = run(capsys, "coeffs", "--W", "2", "--n", "2")
    assert out.splitlines()[0] == "kind,index,value" and len(out.splitlines()) == 6


def test_laplace(cli_env, capsys):
    code, out, _ = run(capsys, "laplace-check", "--s", "2,0")
    data = json.loads(out)
    assert code == 0 and data["residual"] <= data["budget"]


def test_monotone(cli_env, capsys):
    code, out, _ = run(capsys, "monotone-check")
    data = json.loads(out)
    assert code == 0 and all(r["ok"] for r in data["complete_monotone"])


def test_output_file(cli_env, capsys):
    code, out, _ = run(capsys, "verify-expansion", "--s", "6,3", "--out", "v.csv")
    assert code == 0 and out == ""
    assert (cli_env / "v.csv").read_text().startswith("s_re,")


def test_configuration_errors(cli_env, capsys, monkeypatch):
    assert run(capsys, "verify-expansion", "--digits", "5")[0] == 3
    assert run(capsys, "verify-expansion", "--d", "3")[0] == 3
    assert run(capsys, "verify-expansion", "--s", "a,b")[0] == 3
    assert run(capsys, "audit-conjectures", "--alpha", "0.7")[0] == 3
    assert run(capsys, "verify-expansion", "--n", "500")[0] == 3
    monkeypatch.setenv("ZETAPFRAC_CACHE", str(cli_env / "missing.csv"))
    code, _, err = run(capsys, "verify-expansion")
    assert code == 3 and "zeros" in err
    with pytest.raises(SystemExit) as exc:
        main(["bogus"])
    assert exc.value.code == 3


def test_flag_beats_environment(cli_env, capsys, monkeypatch):
    monkeypatch.setenv("ZETAPFRAC_CACHE", str(cli_env / "missing.csv"))
    code, _, _ = run(capsys, "verify-expansion", "--cache", str(cache_file(100)))
    assert code == 0


def test_corrupt_cache_is_config_error(cli_env, capsys, tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text(cache_file(100).read_text().replace("14.1", "14.2", 1))
    (tmp_path / "bad.csv.json").write_text(cache_file(100).with_name("zeros_100.csv.json").read_text())
    assert run(capsys, "verify-expansion", "--cache", str(bad))[0] == 3


def test_zeros_then_coeffs(cli_env, capsys):
    code, out, _ = run(capsys, "zeros", "--n", "5", "--cache", "z5.csv")
    assert code == 0 and json.loads(out)["count"] == 5
    code, out, _ = run(capsys, "coeffs", "--cache", "z5.csv", "--n", "5", "--W", "1", "--format", "json")
    assert code == 0 and len(json.loads(out)["c_imag"]) == 5


def test_module_entry_point(cli_env):
    proc = subprocess.run([sys.executable, "-m", "zetapfrac", "verify-expansion", "--s", "2,2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("s_re,")
