import json
import math
import pytest
from chargedfock import app, desitter
from chargedfock.app import EXIT_BUDGET, EXIT_IDENTITY, EXIT_PASS, EXIT_USAGE, escalating_cutoffs, main


def run(tmp_path, *args):
    output = tmp_path / "report.out"
    code = main(list(args) + ["--output", str(output)])
    return code, output


def test_usage_errors(tmp_path):
    assert main([]) == EXIT_USAGE
    assert main(["verify-everything"]) == EXIT_USAGE
    assert main(["verify-algebra", "--level_cutoff", "ten"]) == EXIT_USAGE
    assert main(["verify-algebra", "--config", str(tmp_path / "missing.cfg")]) == EXIT_USAGE


def test_verify_algebra_at_zero_cutoff_is_vacuous(tmp_path):
    code, output = run(tmp_path, "verify-algebra", "--level_cutoff", "0")
    assert code == EXIT_PASS
    report = json.loads(output.read_text())
    assert report["command"] == "verify-algebra"
    assert any("vacuous" in w for w in report["warnings"])


def test_verify_algebra_passes(tmp_path):
    code, output = run(tmp_path, "verify-algebra", "--level_cutoff", "4", "--j_min", "-1", "--j_max", "1")
    assert code == EXIT_PASS
    report = json.loads(output.read_text())
    assert report["config"]["level_cutoff"] == 4
    assert not [r for r in report["records"] if "verdict" in r]


def test_injected_fault_is_caught(tmp_path):
    code, output = run(tmp_path, "verify-algebra", "--level_cutoff", "4", "--j_min", "-1", "--j_max", "1",
                       "--inject_fault", "sugawara")
    assert code == EXIT_IDENTITY
    report = json.loads(output.read_text())
    failing = [r for r in report["records"] if r.get("verdict") == "fail"]
    assert failing and failing[0]["kind"] == "identity"


def test_verify_decay(tmp_path):
    code, output = run(tmp_path, "verify-decay", "--level_cutoff", "6")
    assert code == EXIT_PASS
    report = json.loads(output.read_text())
    table = [r for r in report["records"] if "n" in r]
    assert [r["n"] for r in table] == list(range(7))
    assert table[1]["closed_form"] == "1/4"
    assert table[2]["computed"] == "5/32"
    assert all(r["verdict"] == "pass" and r["binomial_agrees"] for r in table)
    fit = next(r for r in report["records"] if r.get("fit") == "loglog_slope")
    assert abs(fit["slope"] - fit["expected"]) <= 0.05


def test_converge_writes_csv(tmp_path):
    code, output = run(tmp_path, "converge", "--n_max", "64", "--level_cutoff", "3")
    assert code == EXIT_PASS
    lines = output.read_text().splitlines()
    assert lines[0] == "band,band_norm_sq,partial_sum"
    assert len(lines) == 1 + 65
    sums = [float(line.split(",")[2]) for line in lines[1:]]
    assert all(b >= a for a, b in zip(sums, sums[1:]))


def test_converge_splits_modes(tmp_path):
    output = tmp_path / "series.csv"
    code = main(["converge", "--n_max", "32", "--level_cutoff", "2", "--m_list", "0,1", "--output", str(output)])
    assert code == EXIT_PASS
    assert (tmp_path / "series_m0.csv").exists()
    assert (tmp_path / "series_m1.csv").read_text().startswith("band,band_norm_sq,partial_sum")


def test_diverge_demo_grows_logarithmically(tmp_path):
    code, output = run(tmp_path, "diverge-demo", "--n_max", "512")
    assert code == EXIT_PASS
    rows = [line.split(",") for line in output.read_text().splitlines()[1:]]
    increment, expected = float(rows[-1][2]), float(rows[-1][3])
    assert abs(expected - math.log(2) / math.pi) < 1e-9
    assert abs(increment - expected) < 0.01


def test_lorentz_refuses_large_charge(tmp_path):
    code, _ = run(tmp_path, "verify-lorentz", "--alpha_multiplier", "2")
    assert code == EXIT_USAGE


def test_verify_lorentz_unperturbed(tmp_path):
    code, output = run(tmp_path, "verify-lorentz", "--level_cutoff", "4", "--interior_buffer", "2",
                       "--samples", "1")
    assert code == EXIT_PASS
    report = json.loads(output.read_text())
    sweep = [r for r in report["records"] if r.get("family") == "lorentz"]
    assert len(sweep) == 9 * 2
    assert all(r["residual_re"] == "0/1" for r in sweep)
    fit = next(r for r in report["records"] if r.get("fit") == "lambda")
    assert fit["linear"] == "0/1"


def test_virasoro_c0_needs_gaussian_arithmetic(tmp_path):
    code, _ = run(tmp_path, "verify-virasoro-c0", "--lambda", "1/10")
    assert code == EXIT_USAGE


def test_explore_d_half_is_diagnostic(tmp_path):
    code, output = run(tmp_path, "explore-d-half", "--level_cutoff", "4", "--interior_buffer", "2",
                       "--samples", "0", "--lambda", "1/10")
    assert code == EXIT_PASS
    report = json.loads(output.read_text())
    summary = next(r for r in report["records"] if "closure" in r)
    assert summary["d"] == "1/8"
    assert summary["summable"]
    assert all(r["diagnostic"] for r in report["records"] if r.get("family") == "d_half")


def test_verify_commutativity(tmp_path):
    code, output = run(tmp_path, "verify-commutativity", "--level_cutoff", "6", "--interior_buffer", "2",
                       "--samples", "1", "--m_range", "1")
    assert code in (EXIT_PASS, EXIT_BUDGET)
    report = json.loads(output.read_text())
    summary = next(r for r in report["records"] if r.get("summary") == "commutativity")
    assert summary["vacuum_exact_zero"]
    vacuum = [r for r in report["records"] if r.get("family") == "commutativity" and r["pair"] == 0]
    assert vacuum and all(r["residual_re"] == "0/1" for r in vacuum)


def test_converge_reports_increment_exponent(tmp_path):
    code, output = run(tmp_path, "converge", "--n_max", "128", "--level_cutoff", "2")
    assert code == EXIT_PASS
    report = json.loads((tmp_path / "report_report.json").read_text())
    fit = next(r for r in report["records"] if r.get("fit") == "increment_exponent")
    assert fit["window"] == [32, 64]
    assert fit["expected"] == -0.5
    assert abs(fit["exponent"] + 0.5) <= 0.1
    assert fit["verdict"] == "pass"


def test_converge_flags_wrong_exponent(tmp_path, monkeypatch):
    monkeypatch.setattr(app, "loglog_slope", lambda series, window=None: 1.0)
    code, _ = run(tmp_path, "converge", "--n_max", "128", "--level_cutoff", "2")
    assert code == EXIT_BUDGET


def test_converge_without_fit_window_warns(tmp_path):
    code, _ = run(tmp_path, "converge", "--n_max", "32", "--level_cutoff", "2")
    assert code == EXIT_PASS
    report = json.loads((tmp_path / "report_report.json").read_text())
    assert any("exponent not fitted" in w for w in report["warnings"])


@pytest.mark.parametrize("level_cutoff, buffer, expected", [
    (10, 6, [7, 10]),
    (12, 6, [8, 12]),
    (6, 2, [3, 6]),
    (6, 6, [6]),
    (4, 6, []),
])
def test_escalating_cutoffs_keep_an_excited_level(level_cutoff, buffer, expected):
    assert escalating_cutoffs(level_cutoff, buffer) == expected
    if len(expected) > 1:
        assert expected[0] - buffer >= 1


def test_commutativity_warns_on_vacuous_excited_interior(tmp_path):
    code, output = run(tmp_path, "verify-commutativity", "--level_cutoff", "2", "--interior_buffer", "2",
                       "--samples", "1", "--m_range", "0")
    assert code == EXIT_PASS
    warnings = json.loads(output.read_text())["warnings"]
    assert any("vacuous excited interior" in w for w in warnings)
    assert any("single cutoff" in w for w in warnings)


def test_decay_with_tiny_series_skips_fit(tmp_path):
    code, output = run(tmp_path, "verify-decay", "--level_cutoff", "2", "--n_max", "2")
    assert code == EXIT_PASS
    report = json.loads(output.read_text())
    assert not [r for r in report["records"] if r.get("fit") == "loglog_slope"]
    assert any("too small" in w for w in report["warnings"])


@pytest.mark.parametrize("args", [
    ["verify-lorentz", "--level_cutoff", "4", "--interior_buffer", "6"],
    ["verify-lorentz", "--interior_buffer", "0"],
    ["verify-lorentz", "--j_min", "0", "--j_max", "0"],
    ["verify-virasoro-c0", "--m_range", "3", "--interior_buffer", "2"],
    ["verify-decay", "--beta_multiplier", "5"],
    ["verify-algebra", "--alpha0", "abc"],
])
def test_config_errors_are_usage_errors(tmp_path, args):
    code, _ = run(tmp_path, *args)
    assert code == EXIT_USAGE


def test_internal_errors_are_not_usage_errors(tmp_path, monkeypatch):
    def broken(*args, **kwargs):
        raise ValueError("internal")

    monkeypatch.setattr(desitter, "verify_lorentz", broken)
    with pytest.raises(ValueError):
        main(["verify-lorentz", "--level_cutoff", "4", "--interior_buffer", "2", "--samples", "0",
              "--output", str(tmp_path / "report.json")])
