from __future__ import annotations

import json
import math
from fractions import Fraction

import pytest

from freemoments import cli
from freemoments.exactcomb import IdentityCheck
from freemoments.moments import moment_polynomial


def run(capsys, argv: list[str]) -> tuple[int, str]:
    code = cli.main(argv)
    return code, capsys.readouterr().out


class TestMoments:
    def test_polynomial_table(self, capsys):
        code, out = run(capsys, ["moments", "--n-max", "2", "--mode", "polynomial"])
        assert code == 0
        assert "-1/2 t" in out
        assert "t + 1/3 t^2" in out

    def test_n_max_zero(self, capsys):
        code, out = run(capsys, ["moments", "--n-max", "0"])
        assert code == 0
        assert out.strip().splitlines()[-1].split()[-1] == "1"

    def test_oracle_diffs_all_zero(self, capsys):
        code, out = run(
            capsys, ["moments", "--n-max", "30", "--oracle", "--format", "csv"]
        )
        assert code == 0
        rows = out.strip().splitlines()
        assert rows[0] == "n,m_n,oracle_diff"
        assert len(rows) == 32
        assert all(line.rsplit(",", 1)[1] == "0" for line in rows[1:])

    def test_at_t_values_round_trip_exactly(self, capsys):
        code, out = run(
            capsys,
            ["moments", "--n-max", "6", "--mode", "at-t", "--t", "1/3", "--format", "csv"],
        )
        assert code == 0
        for line in out.strip().splitlines()[1:]:
            n_text, value_text = line.split(",")
            reparsed = Fraction(value_text)
            assert reparsed == moment_polynomial(int(n_text))(Fraction(1, 3))

    def test_json_coefficients_round_trip(self, capsys):
        code, out = run(
            capsys, ["moments", "--n-max", "4", "--format", "json"]
        )
        assert code == 0
        payload = json.loads(out)
        for row in payload["rows"]:
            n = int(row[0])
            # the rendered polynomial is the library's own string form
            assert row[1] == str(moment_polynomial(n))

    def test_at_t_requires_t(self, capsys):
        code = cli.main(["moments", "--mode", "at-t"])
        capsys.readouterr()
        assert code == 2


class TestNu:
    def test_integer_orders_table(self, capsys):
        code, out = run(capsys, ["nu", "--n", "1", "--t", "1"])
        assert code == 0
        assert out.count("1.64872") == 2

    def test_alpha_minus_one(self, capsys):
        code, out = run(capsys, ["nu", "--alpha=-1", "--t", "1", "--format", "csv"])
        assert code == 0
        row = out.strip().splitlines()[1].split(",")
        assert float(row[1]) == pytest.approx(math.exp(0.5), rel=1e-12)

    def test_tiny_time_is_near_one(self, capsys):
        code, out = run(capsys, ["nu", "--n", "1", "--t", "0.000001", "--format", "csv"])
        assert code == 0
        value = float(out.strip().splitlines()[1].split(",")[1])
        assert value == pytest.approx(1.0, abs=1e-5)

    def test_complex_alpha_accepts_i_suffix(self, capsys):
        code, out = run(capsys, ["nu", "--alpha", "0.5+0.5i", "--t", "1", "--format", "csv"])
        assert code == 0
        assert "rel_diff" in out

    def test_requires_exactly_one_selector(self, capsys):
        assert cli.main(["nu", "--t", "1"]) == 2
        capsys.readouterr()
        assert cli.main(["nu", "--n", "2", "--alpha", "1", "--t", "1"]) == 2
        capsys.readouterr()

    def test_malformed_alpha_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            cli.main(["nu", "--alpha", "1+2x", "--t", "1"])
        assert excinfo.value.code == 2
        capsys.readouterr()

    def test_overflowing_order_is_numerical_failure(self, capsys):
        code = cli.main(["nu", "--alpha=200", "--t", "50"])
        capsys.readouterr()
        assert code == 3


class TestVerify:
    def test_stirling_suite_passes(self, capsys):
        code, out = run(capsys, ["verify", "stirling", "--l-max", "8", "--m-max", "8"])
        assert code == 0
        assert "FAIL" not in out

    def test_kummer_suite_passes(self, capsys):
        code, out = run(capsys, ["verify", "kummer", "--samples", "15"])
        assert code == 0

    def test_theorem_main_json(self, capsys):
        code, out = run(
            capsys,
            ["verify", "theorem-main", "--n-max", "6", "--samples", "10", "--format", "json"],
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["passed"] is True
        assert all(check["passed"] for check in payload["checks"])

    def test_failure_sets_exit_code(self, capsys, monkeypatch):
        broken = IdentityCheck(False, Fraction(1), Fraction(2))
        monkeypatch.setattr(cli, "verify_stirling_identity", lambda l, m: broken)
        code, out = run(capsys, ["verify", "stirling", "--l-max", "2", "--m-max", "2"])
        assert code == 1
        assert "FAIL" in out


class TestDensity:
    def test_csv_with_sidecar(self, capsys, tmp_path):
        out_path = tmp_path / "grid.csv"
        code = cli.main(
            ["density", "--t", "1", "--points", "600", "--format", "csv", "--out", str(out_path)]
        )
        capsys.readouterr()
        assert code == 0
        lines = out_path.read_text().strip().splitlines()
        assert lines[0] == "x,density"
        assert len(lines) == 601
        meta = json.loads((tmp_path / "grid.csv.meta.json").read_text())
        assert 0.98 <= meta["mass_estimate"] <= 1.02
        assert meta["solver"]["damping"] == 0.5
        assert meta["support"]["lower"] * meta["support"]["upper"] == pytest.approx(1.0)

    def test_exp_mode_annotates_closed_form_support(self, capsys):
        code, out = run(
            capsys,
            ["density", "--t", "2", "--exp", "--points", "400", "--format", "json"],
        )
        assert code == 0
        payload = json.loads(out)
        r = math.sqrt(2.0)
        assert payload["meta"]["support"]["lower"] == pytest.approx((3 - 2 * r) * math.exp(-r))
        assert payload["meta"]["support"]["upper"] == pytest.approx((3 + 2 * r) * math.exp(r))
        assert min(payload["grid"]["abscissae"]) > 0

    def test_near_delta_time(self, capsys):
        code, out = run(
            capsys,
            ["density", "--t", "1e-9", "--points", "1500", "--format", "json"],
        )
        assert code == 0
        payload = json.loads(out)
        xs = payload["grid"]["abscissae"]
        vs = payload["grid"]["values"]
        peak = max(range(len(vs)), key=vs.__getitem__)
        assert abs(xs[peak]) < 1e-3
        assert 0.98 <= payload["meta"]["mass_estimate"] <= 1.02

    def test_window_validation(self, capsys):
        code = cli.main(["density", "--t", "1", "--x-lo", "2", "--x-hi", "-2"])
        capsys.readouterr()
        assert code == 2


class TestSimulate:
    def test_json_reports_are_byte_identical(self, capsys, tmp_path):
        argv = [
            "simulate", "multiplicative", "--N", "24", "--t", "0.5",
            "--trials", "3", "--steps", "8", "--seed", "11", "--format", "json",
        ]
        first, second = tmp_path / "a.json", tmp_path / "b.json"
        assert cli.main(argv + ["--out", str(first)]) == 0
        assert cli.main(argv + ["--out", str(second)]) == 0
        capsys.readouterr()
        assert first.read_bytes() == second.read_bytes()

    def test_additive_table_shape(self, capsys):
        code, out = run(
            capsys,
            ["simulate", "additive", "--N", "40,60", "--t", "1", "--trials", "4", "--seed", "7"],
        )
        assert code == 0
        assert "model=additive" in out
        body = [line for line in out.splitlines() if line and not line.startswith(("#", "N "))]
        assert len(body) == 8  # two sizes x four orders

    def test_csv_floats_round_trip(self, capsys):
        code, out = run(
            capsys,
            ["simulate", "additive", "--N", "30", "--t", "1", "--trials", "3",
             "--seed", "5", "--format", "csv"],
        )
        assert code == 0
        header, *rows = out.strip().splitlines()
        assert header == "N,n,empirical,oracle,rel_err,std_err"
        for line in rows:
            cells = line.split(",")
            assert float(cells[2]) == float(repr(float(cells[2])))

    def test_zero_time_rejected(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            cli.main(["simulate", "additive", "--N", "4", "--t", "0", "--trials", "2"])
        assert excinfo.value.code == 2
        capsys.readouterr()

    def test_too_few_trials_rejected(self, capsys):
        code = cli.main(["simulate", "additive", "--N", "24", "--t", "1", "--trials", "1"])
        capsys.readouterr()
        assert code == 2
