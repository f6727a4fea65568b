import csv
import io
from fractions import Fraction

from dopfisher.cli import main
from dopfisher.sweeps import SWEEP_COLUMNS, load_figures, run_figure

F = Fraction


def run_cli(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], rows[1:]


class TestFisherCommand:
    def test_charlier_rows(self, capsys):
        code, out, _ = run_cli(capsys, ["fisher", "--family", "charlier",
                                        "--mu", "2", "--n", "3"])
        assert code == 0
        header, rows = parse_csv(out)
        assert header == ["family", "n", "params", "method", "value",
                          "converged", "discrepancy"]
        assert [r[3] for r in rows] == ["direct", "difference", "expansion", "closed"]
        for row in rows:
            assert abs(float(row[4]) - 1.5) < 1e-25
            assert row[5] == "true"
        by_method = {r[3]: r[4] for r in rows}
        assert by_method["expansion"] == "1.5"
        assert by_method["closed"] == "1.5"

    def test_degree_zero_rows_are_zero(self, capsys):
        code, out, _ = run_cli(capsys, ["fisher", "--family", "charlier",
                                        "--mu", "2", "--n", "0"])
        assert code == 0
        _, rows = parse_csv(out)
        assert len(rows) == 4
        assert all(float(r[4]) == 0 for r in rows)

    def test_kravchuk_exact_backend(self, capsys):
        code, out, _ = run_cli(capsys, ["fisher", "--family", "kravchuk",
                                        "--p", "0.5", "--N", "3", "--n", "2",
                                        "--backend", "exact"])
        assert code == 0
        _, rows = parse_csv(out)
        assert all(r[4] == "16/3" for r in rows)
        assert all(r[6] == "0.0" for r in rows)

    def test_hahn_reports_convergence_flag(self, capsys):
        code, out, _ = run_cli(capsys, ["fisher", "--family", "hahn",
                                        "--alpha", "0", "--beta", "0",
                                        "--N", "8", "--n", "2",
                                        "--methods", "expansion,closed",
                                        "--backend", "exact"])
        assert code == 0
        _, rows = parse_csv(out)
        flags = {r[3]: r[5] for r in rows}
        assert flags["closed"] in ("true", "false")
        assert rows[0][3] == "expansion"

    def test_domain_error_exits_2(self, capsys):
        code, _, err = run_cli(capsys, ["fisher", "--family", "charlier",
                                        "--mu", "-1", "--n", "3"])
        assert code == 2
        assert "mu must be > 0" in err

    def test_degree_out_of_range_exits_2(self, capsys):
        code, _, _ = run_cli(capsys, ["fisher", "--family", "kravchuk",
                                      "--p", "1/2", "--N", "3", "--n", "9"])
        assert code == 2

    def test_missing_parameter_exits_64(self, capsys):
        code, _, err = run_cli(capsys, ["fisher", "--family", "charlier", "--n", "3"])
        assert code == 64
        assert "requires parameters" in err

    def test_unknown_method_exits_64(self, capsys):
        code, _, _ = run_cli(capsys, ["fisher", "--family", "charlier",
                                      "--mu", "2", "--n", "3",
                                      "--methods", "magic"])
        assert code == 64

    def test_dps_env_default(self, capsys, monkeypatch):
        monkeypatch.setenv("DOPFISHER_DPS", "60")
        code, out, _ = run_cli(capsys, ["fisher", "--family", "charlier",
                                        "--mu", "2", "--n", "1",
                                        "--methods", "direct"])
        assert code == 0
        _, rows = parse_csv(out)
        digits = len(rows[0][4].replace(".", "").lstrip("0"))
        assert 50 <= digits <= 62


class TestEvalAndDensity:
    def test_eval_single_point(self, capsys):
        code, out, _ = run_cli(capsys, ["eval", "--family", "hahn",
                                        "--alpha", "0", "--beta", "0",
                                        "--N", "5", "--n", "1", "--x", "0"])
        assert code == 0
        _, rows = parse_csv(out)
        assert rows == [["hahn", "1", "N=5;alpha=0;beta=0", "0", "-2"]]

    def test_eval_range(self, capsys):
        code, out, _ = run_cli(capsys, ["eval", "--family", "charlier",
                                        "--mu", "2", "--n", "1",
                                        "--x-start", "0", "--x-stop", "3"])
        assert code == 0
        _, rows = parse_csv(out)
        assert [r[4] for r in rows] == ["-2", "-1", "0", "1"]

    def test_eval_needs_a_point(self, capsys):
        code, _, _ = run_cli(capsys, ["eval", "--family", "charlier",
                                      "--mu", "2", "--n", "1"])
        assert code == 64

    def test_density_all(self, capsys):
        code, out, _ = run_cli(capsys, ["density", "--family", "kravchuk",
                                        "--p", "1/2", "--N", "3", "--n", "0",
                                        "--all"])
        assert code == 0
        _, rows = parse_csv(out)
        assert [r[4] for r in rows] == ["1/8", "3/8", "3/8", "1/8"]

    def test_density_all_rejected_on_infinite_support(self, capsys):
        code, _, _ = run_cli(capsys, ["density", "--family", "charlier",
                                      "--mu", "2", "--n", "0", "--all"])
        assert code == 64

    def test_density_out_of_support_exits_2(self, capsys):
        code, _, _ = run_cli(capsys, ["density", "--family", "kravchuk",
                                      "--p", "1/2", "--N", "3", "--n", "0",
                                      "--x", "9"])
        assert code == 2


class TestSweepCommand:
    def test_manual_sweep_rows(self, capsys):
        argv = ["sweep", "--family", "kravchuk", "--p", "1/7", "--n", "2",
                "--sweep", "N", "--start", "5", "--stop", "8", "--count", "4"]
        code, out, _ = run_cli(capsys, argv)
        assert code == 0
        header, rows = parse_csv(out)
        assert header == list(SWEEP_COLUMNS)
        assert [r[3] for r in rows] == ["5", "6", "7", "8"]
        assert all(r[6] == "expansion" for r in rows)

    def test_byte_determinism(self, capsys):
        argv = ["sweep", "--figure", "fig5"]
        code, first, _ = run_cli(capsys, argv)
        assert code == 0
        code, second, _ = run_cli(capsys, argv)
        assert first == second

    def test_domain_violations_become_error_rows(self, capsys):
        argv = ["sweep", "--family", "hahn", "--beta", "0", "--N", "8",
                "--n", "1", "--sweep", "alpha", "--start=-3/2", "--stop=1/2",
                "--count", "5"]
        code, out, _ = run_cli(capsys, argv)
        assert code == 0
        _, rows = parse_csv(out)
        errors = [r for r in rows if r[9]]
        values = [r for r in rows if not r[9]]
        assert len(errors) == 2  # alpha = -3/2 and -1
        assert len(values) == 3

    def test_non_integer_degree_grid_rejected(self, capsys):
        argv = ["sweep", "--family", "charlier", "--mu", "2",
                "--sweep", "n", "--start", "1", "--stop", "2", "--count", "3"]
        code, _, _ = run_cli(capsys, argv)
        assert code == 64

    def test_out_file(self, capsys, tmp_path):
        target = tmp_path / "rows.csv"
        argv = ["sweep", "--family", "charlier", "--mu", "2", "--sweep", "n",
                "--start", "1", "--stop", "3", "--count", "3",
                "--out", str(target)]
        code, out, _ = run_cli(capsys, argv)
        assert code == 0 and out == ""
        lines = target.read_text().splitlines()
        assert len(lines) == 4
        assert lines[1].split(",")[7] == "1/2"  # n/mu at n=1

    def test_list_figures(self, capsys):
        code, out, _ = run_cli(capsys, ["sweep", "--list-figures"])
        assert code == 0
        listed = [line.split(":")[0] for line in out.splitlines()]
        assert listed == [f"fig{i}" for i in range(1, 11)]

    def test_unknown_figure(self, capsys):
        code, _, _ = run_cli(capsys, ["sweep", "--figure", "fig99"])
        assert code == 64

    def test_figure_one_approaches_levels(self, capsys):
        # the three degree-sweep curves head toward 3, 3 and 6
        rows = run_figure("fig1")
        curves = {}
        for row in rows:
            curves.setdefault(row["curve"], []).append(Fraction(row["value"]))
        levels = {"M_3/2_1/4": 3, "M_4_1/4": 3, "M_3/2_1/7": 6}
        for label, values in curves.items():
            level = levels[label]
            assert abs(values[-1] - level) < abs(values[0] - level)

    def test_figures_config_is_complete(self):
        figures = load_figures()
        assert sorted(figures) == sorted(f"fig{i}" for i in range(1, 11))
        assert all(len(specs) >= 3 for specs in figures.values())


class TestVerifyCommand:
    def test_single_suite(self, capsys):
        code, out, _ = run_cli(capsys, ["verify", "--suite", "charlier"])
        assert code == 0
        assert "suite charlier: PASS" in out
        assert out.strip().endswith("VERIFY: PASS")

    def test_list_suites(self, capsys):
        code, out, _ = run_cli(capsys, ["verify", "--list-suites"])
        assert code == 0
        assert "three-way" in out.split()

    def test_unknown_suite_exits_64(self, capsys):
        code, _, _ = run_cli(capsys, ["verify", "--suite", "nope"])
        assert code == 64

    def test_hahn_closed_form_verbose_reports_flags(self, capsys):
        code, out, _ = run_cli(capsys, ["verify", "--suite", "hahn-closed-form",
                                        "--verbose"])
        assert code == 0
        assert "c3_converged=" in out


class TestVerifyFailurePath:
    def test_failing_suite_exits_1(self, capsys, monkeypatch):
        from dopfisher import verify as verify_mod
        from dopfisher.verify import SuiteResult

        def broken(dps, trunc):
            result = SuiteResult("broken")
            result.check(False, "family=charlier mu=2 n=3: forced failure for the exit-code path")
            return result

        monkeypatch.setitem(verify_mod.SUITES, "broken", broken)
        code = main(["verify", "--suite", "broken"])
        out = capsys.readouterr().out
        assert code == 1
        assert "suite broken: FAIL" in out
        assert "first failing case: family=charlier" in out
        assert out.strip().endswith("VERIFY: FAIL")

    def test_density_range_on_infinite_support(self, capsys):
        code, out, _ = run_cli(capsys, ["density", "--family", "charlier",
                                        "--mu", "2", "--n", "1",
                                        "--x-start", "0", "--x-stop", "2",
                                        "--dps", "60"])
        assert code == 0
        _, rows = parse_csv(out)
        assert len(rows) == 3
        assert all("." in r[4] for r in rows)  # irrational normalization: decimal output


class TestContractDetails:
    def test_dps_below_contract_rejected(self, capsys):
        code, _, err = run_cli(capsys, ["fisher", "--family", "charlier",
                                        "--mu", "2", "--n", "1", "--dps", "20"])
        assert code == 64
        assert "50 decimal digits" in err

    def test_sweep_rows_are_grid_major_method_minor(self, capsys):
        argv = ["sweep", "--family", "kravchuk", "--p", "1/2", "--n", "1",
                "--sweep", "N", "--start", "3", "--stop", "4", "--count", "2",
                "--methods", "expansion,closed"]
        code, out, _ = run_cli(capsys, argv)
        assert code == 0
        _, rows = parse_csv(out)
        assert [(r[3], r[6]) for r in rows] == [
            ("3", "expansion"), ("3", "closed"),
            ("4", "expansion"), ("4", "closed")]

    def test_kravchuk_float_backend_prints_decimal(self, capsys):
        code, out, _ = run_cli(capsys, ["fisher", "--family", "kravchuk",
                                        "--p", "0.5", "--N", "3", "--n", "2",
                                        "--methods", "expansion"])
        assert code == 0
        _, rows = parse_csv(out)
        assert rows[0][4].startswith("5.3333333333")

    def test_float_values_round_trip_at_declared_precision(self, capsys):
        import mpmath
        from mpmath import mpf
        code, out, _ = run_cli(capsys, ["fisher", "--family", "charlier",
                                        "--mu", "3", "--n", "7",
                                        "--methods", "direct", "--dps", "60"])
        assert code == 0
        _, rows = parse_csv(out)
        with mpmath.workdps(60):
            reparsed = mpf(rows[0][4])
            assert abs(reparsed - mpf(7) / 3) < mpf(10) ** -25
            assert mpmath.nstr(reparsed, 55) == mpmath.nstr(mpf(rows[0][4]), 55)
