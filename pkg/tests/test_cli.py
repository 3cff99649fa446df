import json

import pytest

from ou_bounds import cli
from ou_bounds.errors import ConvergenceError


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_bounds_writes_csv(tmp_path, capsys):
    out = tmp_path / "b.csv"
    code, _, err = run(capsys, "bounds", "--n-grid", "8,16,32,64", "--out", str(out))
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "N,P_N,regime,D_s,C_u,D_p_prime,D_l,C_a,D_u,window_valid"
    assert len(lines) == 5
    assert "d_s: slope=" in err


def test_bounds_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run(capsys, "bounds", "--n-grid", "8,16,32,64", "--out", str(a))
    run(capsys, "bounds", "--n-grid", "8,16,32,64", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_bounds_stdout(capsys):
    code, out, _ = run(capsys, "bounds", "--n-grid", "8,16", "--out", "-")
    assert code == 0 and out.startswith("N,P_N,")


def test_bad_alpha(capsys):
    code, _, err = run(capsys, "bounds", "--alpha", "-1", "--n-grid", "8,16", "--out", "-")
    assert code == 2 and "alpha" in err


def test_out_of_range_alpha_warns(capsys):
    with pytest.warns(UserWarning, match="alpha"):
        code, _, _ = run(capsys, "regimes", "--alpha", "8")
    assert code == 0


def test_config_file_and_precedence(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"power": "power:1,-2", "n_grid": [8, 16], "out": str(tmp_path / "x.csv")}))
    code, _, _ = run(capsys, "bounds", "--config", str(cfg))
    assert code == 0
    assert "VerySmall" in (tmp_path / "x.csv").read_text()
    code, _, _ = run(capsys, "bounds", "--config", str(cfg), "--power", "linear:1")
    assert code == 0
    assert ",Medium," in (tmp_path / "x.csv").read_text()


@pytest.mark.parametrize("content", ["{not json", "[1, 2]", '{"colour": 1}', '{"sigma": "big"}'])
def test_bad_config_file(tmp_path, capsys, content):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(content)
    code, _, err = run(capsys, "regimes", "--config", str(cfg))
    assert code == 2 and "config error" in err


def test_missing_config_file(capsys):
    assert run(capsys, "regimes", "--config", "/nonexistent/cfg.json")[0] == 2


def test_usage_errors(capsys):
    assert run(capsys)[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "bounds", "--n-grid", "8,x")[0] == 2
    assert run(capsys, "bounds", "--power", "cubic:3")[0] == 2
    assert run(capsys, "regimes", "--power", "power:1")[0] == 2


def test_help_exits_zero(capsys):
    assert run(capsys, "--help")[0] == 0


def test_validate_default(capsys):
    code, out, _ = run(capsys, "validate")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 6 and all(line.startswith("[PASS]") for line in lines)


def test_validate_needs_trials(capsys):
    code, _, err = run(capsys, "validate", "--trials", "10")
    assert code == 2 and "trials" in err


def test_validate_skips_outside_window(capsys):
    code, out, _ = run(capsys, "validate", "--power", "power:1,-2", "--trials", "500")
    assert code == 0
    assert out.count("[SKIP]") == 4


def test_regimes(capsys):
    code, out, _ = run(capsys, "regimes")
    assert code == 0
    rows = out.splitlines()[1:3]
    assert all("Medium" in r for r in rows)
    code, out, _ = run(capsys, "regimes", "--powers", "exproot:0.5")
    assert code == 0 and "Large" in out.splitlines()[1]


def test_regimes_empty_list(capsys):
    code, _, err = run(capsys, "regimes", "--powers", "")
    assert code == 2 and "empty" in err


def test_numeric_failure_exit_code(monkeypatch, capsys):
    def boom(*args, **kwargs):
        raise ConvergenceError("bisection stalled", module="rate-distortion")

    monkeypatch.setattr(cli, "sweep", boom)
    code, _, err = run(capsys, "bounds", "--out", "-")
    assert code == 1 and "rate-distortion" in err


def test_row_failure_exit_code(monkeypatch, tmp_path, capsys):
    from ou_bounds import report

    real = report.compute_row

    def flaky(p, pl, h, alpha, n, *args):
        if n == 16:
            raise ConvergenceError("synthetic", module="achievable")
        return real(p, pl, h, alpha, n, *args)

    monkeypatch.setattr(report, "compute_row", flaky)
    code, _, err = run(capsys, "bounds", "--n-grid", "8,16,32", "--out", str(tmp_path / "o.csv"))
    assert code == 1 and "N=16" in err and "achievable" in err
    assert len((tmp_path / "o.csv").read_text().splitlines()) == 4


def test_unwritable_output(capsys):
    code, _, err = run(capsys, "bounds", "--n-grid", "8,16", "--out", "/nonexistent/dir/o.csv")
    assert code == 2


def test_console_script_entry_point():
    import subprocess
    import sys

    out = subprocess.run([sys.executable, "-m", "ou_bounds.cli", "regimes", "--powers", "linear:1"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and "Medium" in out.stdout
