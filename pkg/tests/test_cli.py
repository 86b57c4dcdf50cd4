import json
import math

import pytest

from relmarginal.cli import format_float, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_spectrum(capsys):
    code, out, _ = run(capsys, "spectrum", "--m0", "0", "--lambda-max", "2")
    assert code == 0
    assert out == "lambda,mass_squared,degeneracy\n0,1,1\n1,2,3\n2,3,6\n"
    _, out, _ = run(capsys, "spectrum", "--m0", "1", "--lambda-max", "0")
    assert out.splitlines()[1] == "0,2,1"


def test_spectrum_rejects_negative(capsys):
    code, _, err = run(capsys, "spectrum", "--lambda-max", "-1")
    assert code == 2 and "non-negative" in err


def test_marginal_origin_value(capsys):
    code, out, _ = run(capsys, "marginal", "--beta", "0", "--plane", "position", "--grid", "0:1:2")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "U,V,w"
    assert lines[1] == "0.0,0.0,0.3183098861837907"
    assert len(lines) == 5


def test_marginal_boosted_value(capsys):
    _, out, _ = run(capsys, "marginal", "--beta", "0.6", "--grid", "1:2:2", "--grid", "-1:0:2")
    row = out.splitlines()[2]
    assert row.startswith("1.0,0.0,")
    assert float(row.split(",")[2]) == pytest.approx(math.exp(-0.25) / math.pi, rel=1e-15)


def test_marginal_precision(capsys):
    _, out, _ = run(capsys, "marginal", "--grid", "0:1:2", "--precision", "6")
    assert out.splitlines()[1] == "0,0,0.31831"


def test_degenerate_sigma_exits_one(capsys):
    code, out, err = run(capsys, "marginal", "--sigma", "1,0,0,0,2,0,0,0")
    assert code == 1
    assert out == ""
    assert "smallest singular value" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["marginal", "--beta", "1.0"],
        ["marginal", "--sigma", "1,2,3"],
        ["marginal", "--grid", "0:1"],
        ["marginal", "--grid", "0:1:1"],
        ["marginal", "--precision", "3"],
        ["marginal", "--n", "1", "--method", "analytic"],
        ["verify", "--check", "galileo", "--mu", "0", "--nu", "0"],
    ],
)
def test_usage_errors_exit_two(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err


def test_argparse_errors_exit_two(capsys):
    with pytest.raises(SystemExit) as info:
        main(["marginal", "--format", "xml"])
    assert info.value.code == 2


def test_verify_covariance_report(capsys):
    code, out, _ = run(capsys, "verify", "--check", "covariance", "--n", "0", "--beta", "0.6", "--tol", "1e-12")
    report = json.loads(out)
    assert code == 0
    assert list(report) == ["check", "parameters", "max_deviation", "tolerance", "passed", "runtime_ms", "config_echo"]
    assert report["check"] == "covariance"
    assert report["passed"] is True and report["max_deviation"] <= 1e-12
    assert report["runtime_ms"] is None
    assert report["config_echo"]["beta"] == 0.6


def test_verify_galileo(capsys):
    code, out, _ = run(capsys, "verify", "--check", "galileo", "--v", "1", "--t", "0")
    report = json.loads(out)
    assert code == 0 and report["passed"] and report["max_deviation"] == 0.0
    assert report["parameters"]["shift"] == 1.0


def test_verify_normalization(capsys):
    code, out, _ = run(capsys, "verify", "--check", "normalization", "--n", "2", "--beta", "0.3")
    report = json.loads(out)
    assert code == 0 and report["passed"] and report["tolerance"] == 1e-6


def test_verify_failure_exit_code(capsys):
    # an impossible tolerance must be reported as a failure, never a pass
    code, out, _ = run(capsys, "verify", "--check", "subsidiary", "--tol", "1e-30")
    report = json.loads(out)
    assert code == 1 and report["passed"] is False
    assert report["max_deviation"] > report["tolerance"]


def test_verify_all(capsys):
    code, out, _ = run(capsys, "verify", "--check", "all", "--n", "1", "--beta", "0.3", "--timing")
    report = json.loads(out)
    assert code == 0 and report["passed"]
    assert [r["check"] for r in report["results"]] == ["covariance", "normalization", "limits", "galileo", "subsidiary"]
    assert all(r["passed"] for r in report["results"])
    assert report["runtime_ms"] > 0


def test_boost_convention_flips_sign(capsys):
    _, a, _ = run(capsys, "marginal", "--beta", "0.6", "--grid", "-1:1:3")
    _, b, _ = run(capsys, "marginal", "--beta", "-0.6", "--boost-convention", "eq7.46", "--grid", "-1:1:3")
    assert a == b


def test_config_file_precedence(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nbeta = 0.6\ngrid = 0:1:2\nprecision = 8  # trailing\n")
    _, from_file, _ = run(capsys, "marginal", "--config", str(cfg))
    _, explicit, _ = run(capsys, "marginal", "--beta", "0.6", "--grid", "0:1:2", "--precision", "8")
    assert from_file == explicit
    _, override, _ = run(capsys, "marginal", "--config", str(cfg), "--beta", "0")
    assert override.splitlines()[1] == "0,0,0.31830989"


def test_config_file_errors(capsys, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    assert run(capsys, "marginal", "--config", str(cfg))[0] == 2
    assert run(capsys, "marginal", "--config", str(tmp_path / "missing.cfg"))[0] == 2


def test_out_file_and_json_table(capsys, tmp_path):
    target = tmp_path / "w.json"
    code, out, _ = run(capsys, "wavefunction", "--grid", "0:1:2", "--format", "json", "--out", str(target))
    assert code == 0 and out == ""
    body = json.loads(target.read_text())
    assert body["columns"] == ["z", "t", "psi"]
    assert body["rows"][0] == [0.0, 0.0, 1 / math.sqrt(math.pi)]


def test_wavefunction_momentum(capsys):
    code, out, _ = run(capsys, "wavefunction", "--space", "momentum", "--beta", "0.6", "--grid", "0:0.5:2")
    rows = [line.split(",") for line in out.splitlines()[1:]]
    assert code == 0
    assert float(rows[2][2]) == pytest.approx(math.exp(-0.5) / math.sqrt(math.pi), rel=1e-14)


def test_wigner_command(capsys):
    code, out, _ = run(capsys, "wigner", "--grid", "0:1:2")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "u,v,p_u,p_v,W" and len(lines) == 17
    assert float(lines[1].split(",")[4]) == pytest.approx(1 / math.pi**2, rel=1e-15)
    code, out, _ = run(capsys, "wigner", "--n", "1", "--grid", "0:0:2", "--quad-scheme", "gauss-hermite", "--quad-order", "8")
    assert float(out.splitlines()[1].split(",")[4]) == pytest.approx(-1 / math.pi**2, abs=1e-14)


def test_format_float():
    assert format_float(1 / math.pi, 17) == "0.3183098861837907"
    assert format_float(1 / math.pi, 6) == "0.31831"
    for x in (0.1, 1e-300, 2.5e17, -3.0):
        assert float(format_float(x, 17)) == x
