"""Command-line front end: parsing, output format, determinism, exit codes."""

import numpy as np
import pytest

import wklib
from wklib.cli import main, parse_family, UsageError


def _printed(out, key):
    for line in out.splitlines():
        if line.startswith(key + ":"):
            return abs(float(line.split(":")[1].split()[0]))
    raise AssertionError(f"{key} not printed")


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# -- family grammar ---------------------------------------------------------------


def test_parse_family_specs():
    p = parse_family("truncated:2,1,10")
    assert p.support == (1.0, 10.0)
    q = parse_family("two-regime:2,4,3")
    assert q.value(1.0) > 0
    assert parse_family("three-regime").value(1.0) > 0


def test_parse_family_errors():
    with pytest.raises(UsageError):
        parse_family("gaussian:1")
    with pytest.raises(UsageError):
        parse_family("truncated:1,2")
    with pytest.raises(UsageError):
        parse_family("truncated:a,b,c")


def test_families_listing(capsys):
    code, out, _ = run(capsys, "families")
    assert code == 0
    for name in ("truncated", "two-regime", "three-regime", "multi-regime",
                 "ode"):
        assert name in out


# -- transform CSV ------------------------------------------------------------------


def test_transform_csv_and_determinism(tmp_path, capsys):
    args = ["transform", "--family", "truncated:2,1,10", "--d", "3",
            "--lmin", "0.01", "--lmax", "1", "--ppd", "4", "--tol", "1e-6"]
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2)]) == 0
    text = out1.read_text()
    lines = text.splitlines()
    assert lines[0] == f"# wklib {wklib.__version__}"
    assert "family=truncated:2,1,10" in lines[1]
    assert lines[2] == "lambda,value,slope,err"
    body = [ln.split(",") for ln in lines[3:]]
    assert all(len(row) == 4 for row in body)
    lams = np.array([float(r[0]) for r in body])
    assert lams[0] == pytest.approx(0.01) and lams[-1] == pytest.approx(1.0)
    # byte-for-byte reproducible
    assert text == out2.read_text()
    capsys.readouterr()


def test_transform_values_match_api(tmp_path):
    out = tmp_path / "c.csv"
    assert main(["transform", "--family", "truncated:2,1,10", "--d", "2",
                 "--lmin", "0.1", "--lmax", "1", "--ppd", "4",
                 "--tol", "1e-7", "--out", str(out)]) == 0
    p = wklib.make_truncated_power(2.0, 1.0, 10.0)
    for line in out.read_text().splitlines()[3:]:
        lam, val, slope, _ = (float(x) for x in line.split(","))
        ref, _ = wklib.wk_point(2, p, lam, tol=1e-7)
        assert val == pytest.approx(ref, rel=1e-6)


def test_slope_command(capsys):
    code, out, _ = run(capsys, "slope", "--family", "truncated:2,1,10",
                       "--lam", "0.5")
    assert code == 0
    assert "value=" in out and "slope=" in out


# -- gauges, thresholds, plan ---------------------------------------------------------


def test_gauges_command(capsys):
    code, out, _ = run(capsys, "gauges", "--family", "truncated:2,1,10",
                       "--alpha", "-2", "--a", "1", "--b", "10")
    assert code == 0
    assert _printed(out, "p_zero") < 1e-12
    assert _printed(out, "p_inf") < 1e-12


def test_thresholds_command(capsys):
    code, out, _ = run(capsys, "thresholds", "--family", "two-regime:2,4,10",
                       "--d", "3")
    assert code == 0
    assert "k_sharp=285.16" in out
    assert "k_flat=8.0011" in out
    assert "gap_ok=True" in out


def test_plan_command(capsys):
    code, out, _ = run(capsys, "plan", "--family", "three-regime",
                       "--d", "3", "--alpha", "1.53", "--k1", "1",
                       "--k2", "1e4")
    assert code == 0
    assert "feasible=True" in out
    assert "rhs_bound=" in out


def test_plan_infeasible_still_exits_zero(capsys):
    code, out, _ = run(capsys, "plan", "--family", "two-regime:2,4,1",
                       "--d", "3", "--alpha", "1.667", "--k1", "1",
                       "--k2", "2")
    assert code == 0
    assert "feasible=False" in out


def test_plan_sweep(tmp_path):
    out = tmp_path / "sweep.csv"
    assert main(["plan", "--sweep-alpha", "--sweep-points", "11",
                 "--target", "1", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[2] == "alpha,min_reynolds"
    rows = [ln.split(",") for ln in lines[3:]]
    assert len(rows) == 11
    mid = [float(r[1]) for r in rows if abs(float(r[0]) - 2.0) < 0.01]
    assert mid and mid[0] == pytest.approx(4.0, rel=1e-9)


# -- verify -----------------------------------------------------------------------


def test_verify_kernel_suite(tmp_path, capsys):
    out = tmp_path / "report.csv"
    code, text, _ = run(capsys, "verify", "--suite", "kernel",
                        "--out", str(out))
    assert code == 0
    assert ": pass" in text
    assert out.read_text().startswith("check_id,")


# -- input CSV and exit codes ----------------------------------------------------------


def test_input_csv_profile(tmp_path, capsys):
    ks = np.geomspace(0.5, 50.0, 16)
    spec = tmp_path / "spec.csv"
    spec.write_text("\n".join(f"{k:.10g},{k**-2.0:.10g}" for k in ks))
    code, out, _ = run(capsys, "gauges", "--input", str(spec),
                       "--alpha", "-2", "--a", "1", "--b", "10")
    assert code == 0
    assert _printed(out, "p_inf") < 1e-6


def test_usage_errors_exit_two(capsys):
    code, _, err = run(capsys, "slope", "--family", "gaussian:1",
                       "--lam", "1")
    assert code == 2 and "unknown family" in err
    code, _, err = run(capsys, "slope", "--lam", "1")
    assert code == 2 and "profile is required" in err
    code, _, err = run(capsys, "gauges", "--family", "truncated:2,1,10",
                       "--input", "x.csv", "--alpha", "-2")
    assert code == 2


def test_domain_errors_exit_one(capsys):
    code, _, err = run(capsys, "slope", "--family", "truncated:2,1,10",
                       "--lam", "-1")
    assert code == 1
    assert "error:" in err


def test_bad_subcommand_exits_two(capsys):
    assert run(capsys, "frobnicate")[0] == 2


def test_version_flag(capsys):
    code, out, _ = run(capsys, "--version")
    assert code == 0
    assert wklib.__version__ in out
