import json
import subprocess
import sys

import pytest

from binombounds import cli, verify
from binombounds.bounds import c_bound_pair as real_pair


def run(capsys, *argv):
    try:
        status = cli.main(list(argv))
    except SystemExit as exc:
        status = exc.code
    out, err = capsys.readouterr()
    return status, out, err


class TestBounds:
    def test_json(self, capsys):
        status, out, _ = run(capsys, "bounds", "-n", "10", "-p", "0.5", "-k", "4", "--format=json")
        assert status == 0
        data = json.loads(out)
        assert data["lower"] == 0.26284643455592566
        assert data["upper"] == 0.5

    def test_central_case_text(self, capsys):
        status, out, _ = run(capsys, "bounds", "-n", "10", "-p", "0.5", "-k", "5")
        assert status == 0
        assert "lower  0.5\n" in out.replace("      ", "  ")

    def test_log_and_refine(self, capsys):
        status, out, _ = run(capsys, "bounds", "-n", "10", "-p", "0.5", "-k", "4", "--log", "--refine", "--format=json")
        data = json.loads(out)
        assert status == 0
        assert data["log_lower"] < data["log_upper"] < 0
        assert 386 / 1024 <= data["refined_upper"] < data["upper"]

    def test_refine_at_last_k(self, capsys):
        status, out, _ = run(capsys, "bounds", "-n", "10", "-p", "0.5", "-k", "9", "--refine", "--format=json")
        data = json.loads(out)
        assert status == 0 and data["refined_upper"] == data["upper"]

    def test_rational_p(self, capsys):
        status, out, _ = run(capsys, "bounds", "-n", "9", "-p", "1/3", "-k", "3", "--format=json")
        assert status == 0
        assert json.loads(out)["p"] == 1 / 3

    @pytest.mark.parametrize("argv", [
        ["bounds", "-n", "10", "-p", "0.5", "-k", "10"],
        ["bounds", "-n", "10", "-p", "1.5", "-k", "1"],
        ["bounds", "-n", "10", "-p", "x", "-k", "1"],
        ["bounds", "-n", "0", "-p", "0.5", "-k", "0"],
        ["quantile", "-n", "10", "-p", "0.5", "-q", "1"],
        ["table", "-n", "10", "-p", "0.5", "--k-range", "3:12"],
        ["verify", "--n-max", "6000"],
        ["verify", "--p-grid", "0.5:0.1:0.1"],
        ["nonsense"],
    ])
    def test_usage_errors_exit_2(self, capsys, argv):
        status, out, err = run(capsys, *argv)
        assert status == 2
        assert out == ""
        assert "error" in err


class TestQuantile:
    def test_median(self, capsys):
        status, out, _ = run(capsys, "quantile", "-n", "10", "-p", "0.5", "-q", "0.5", "--format=csv")
        assert status == 0
        header, row = out.splitlines()
        data = dict(zip(header.split(","), row.split(",")))
        assert (data["k_low"], data["k_high"]) == ("4", "5")

    def test_far_quantile(self, capsys):
        status, out, _ = run(capsys, "quantile", "-n", "100", "-p", "0.3", "-q", "0.999", "--format=json")
        data = json.loads(out)
        # oracle quantile of Bin(100, 3/10) at 0.999 is 44
        assert data["k_low"] <= 44 <= data["k_high"]


class TestTable:
    def test_rows_and_gap(self, capsys):
        status, out, _ = run(capsys, "table", "-n", "10", "-p", "0.5", "--format=csv")
        lines = out.split("\n")
        assert lines[0] == "k,lower,oracle,upper,pmf,gap"
        rows = [dict(zip(lines[0].split(","), map(float, l.split(",")))) for l in lines[1:] if l]
        assert len(rows) == 10
        assert all(r["gap"] < r["pmf"] for r in rows)
        assert "\r" not in out

    def test_single_trial(self, capsys):
        status, out, _ = run(capsys, "table", "-n", "1", "-p", "0.3", "--format=json")
        (row,) = json.loads(out)
        assert row["lower"] == row["oracle"] == 0.7

    def test_log_columns_finite(self, capsys):
        status, out, _ = run(capsys, "table", "-n", "50", "-p", "0.2", "--log", "--format=json")
        rows = json.loads(out)
        assert len(rows) == 50
        for row in rows:
            for key in ("log_lower", "log_oracle", "log_upper"):
                assert isinstance(row[key], float)
            # equal at the attained ends, up to rounding
            slack = 1e-12 * abs(row["log_oracle"])
            assert row["log_lower"] <= row["log_oracle"] + slack
            assert row["log_oracle"] <= row["log_upper"] + slack

    def test_k_range(self, capsys):
        status, out, _ = run(capsys, "table", "-n", "30", "-p", "0.4", "--k-range", "5:7", "--format=json")
        assert [r["k"] for r in json.loads(out)] == [5, 6, 7]

    def test_beyond_exact_limit(self, capsys):
        status, out, _ = run(capsys, "table", "-n", "6000", "-p", "0.5", "--k-range", "2990:2991", "--format=json")
        rows = json.loads(out)
        assert status == 0
        assert all(r["lower"] <= r["oracle"] <= r["upper"] for r in rows)


class TestVerify:
    def test_clean_run(self, capsys):
        status, out, _ = run(capsys, "verify", "--n-max", "30", "--p-grid", "0.05:0.95:0.15", "--refine", "--format=json")
        data = json.loads(out)
        assert status == 0
        assert data["cases_failed"] == 0 == len(data["failures"])

    def test_byte_identical(self, capsys):
        first = run(capsys, "verify", "--n-max", "25", "--p-grid", "0.1:0.9:0.2", "--seed", "42")
        second = run(capsys, "verify", "--n-max", "25", "--p-grid", "0.1:0.9:0.2", "--seed", "42")
        assert first == second

    def test_injected_fault_exits_1(self, capsys, monkeypatch):
        def flipped(params, k):
            value, sf = real_pair(params, k)
            if 0 < k < params.n:
                # mirror the bound around 1/2, which breaks the inequalities
                value, sf = sf, value
            return value, sf

        monkeypatch.setattr(verify, "c_bound_pair", flipped)
        status, out, _ = run(capsys, "verify", "--n-max", "8", "--p-grid", "0.2:0.4:0.2", "--format=json")
        data = json.loads(out)
        assert status == 1
        assert data["cases_failed"] == len(data["failures"]) > 0
        keys = [(f["n"], f["p"], f["k"]) for f in data["failures"]]
        assert keys == sorted(keys)

    def test_csv_lists_failures(self, capsys, monkeypatch):
        monkeypatch.setattr(verify, "c_bound_pair", lambda params, k: (1.0, 0.0))
        status, out, err = run(capsys, "verify", "--n-max", "3", "--p-grid", "0.5:0.5:0.1", "--format=csv")
        assert status == 1
        assert out.startswith("n,p,k,detail\n")
        assert "cases_failed=" in err


class TestSerialization:
    def test_seventeen_digits_round_trip(self):
        for x in (0.1, 1 / 3, 2.0**-1074, 1e300, -0.0, 123456789.0):
            assert float(cli.format_number(x)) == x

    def test_non_finite_is_null(self):
        assert cli.format_number(float("-inf")) == "null"

    def test_module_entry_point(self):
        proc = subprocess.run(
            [sys.executable, "-m", "binombounds", "bounds", "-n", "10", "-p", "0.5", "-k", "5", "--format=csv"],
            capture_output=True, text=True, check=False,
        )
        assert proc.returncode == 0
        assert proc.stdout == "n,p,k,lower,upper\n10,0.5,5,0.5,0.7371535654440744\n"
