import contextlib
import io

import pytest

from stochtaylor.cli import main


def run_cli(*argv):
    out = io.StringIO()
    with contextlib.redirect_stdout(out):
        code = main(list(argv))
    return code, out.getvalue()


class TestBasics:
    def test_usage_error_exit_2(self, capsys):
        assert main(["truncate"]) == 2  # missing required flags

    def test_unknown_command_exit_2(self):
        assert main(["frobnicate"]) == 2

    def test_domain_error_exit_1(self, capsys):
        code = run_cli("error", "--weights", "0,0", "--pattern", "1,2,3",
                       "--p", "1", "--step", "1.0")[0]
        assert code == 1

    def test_determinism(self):
        argv = ["mse", "--spec", "00", "--i", "1,2", "--p", "0", "--step", "1",
                "--paths", "2000", "--grid", "64", "--seed", "9"]
        c1, o1 = run_cli(*argv)
        c2, o2 = run_cli(*argv)
        assert c1 == c2 == 0
        assert o1 == o2

    def test_config_echo(self):
        _, out = run_cli("error", "--weights", "0,0", "--p", "2", "--step", "0.5")
        assert out.splitlines()[0].startswith("> stochtaylor error")


class TestSubcommands:
    def test_truncate_published_entry(self):
        code, out = run_cli("truncate", "--k", "3", "--weights", "0,0,0",
                            "--pattern", "distinct", "--step", "0.011",
                            "--order-exp", "4")
        assert code == 0
        assert out.splitlines()[-1] == "12"

    def test_truncate_published_entry_fine_step(self):
        code, out = run_cli("truncate", "--k", "3", "--weights", "0,0,0",
                            "--pattern", "distinct", "--step", "0.0035",
                            "--order-exp", "4")
        assert code == 0
        assert out.splitlines()[-1] == "36"

    def test_truncate_weight_length_conflict(self):
        code, _ = run_cli("truncate", "--k", "2", "--weights", "0,0,0",
                          "--step", "0.011", "--order-exp", "4")
        assert code == 1

    def test_error_values(self):
        code, out = run_cli("error", "--weights", "00", "--pattern", "1,2",
                            "--p", "0", "--step", "1.0")
        assert code == 0
        assert "exact_error 0.25" in out
        assert "kfact_bound 0.5" in out

    def test_error_jsonl(self):
        import json

        code, out = run_cli("error", "--weights", "00", "--pattern", "distinct",
                            "--p", "0", "--step", "1.0", "--format", "jsonl")
        assert code == 0
        rec = json.loads(out.splitlines()[-1])
        assert rec["exact_error"] == pytest.approx(0.25)

    def test_tables_markdown(self):
        code, out = run_cli("tables", "--id", "23", "--format", "md")
        assert code == 0
        assert "| p | 0 | 0 | 1 | 2 | 4 | 8 |" in out
        assert "117649" in out

    def test_tables_csv(self):
        code, out = run_cli("tables", "--id", "10", "--format", "csv")
        assert code == 0
        assert "q(2.1.a),0,2,32,512" in out

    def test_tables_bad_id(self):
        assert run_cli("tables", "--id", "99")[0] == 1

    def test_plan(self):
        code, out = run_cli("plan", "--scheme", "2.0", "--step", "0.25")
        assert code == 0
        assert "I_(00) q=8" in out
        assert "I_(000) q=2" in out
        assert "I_(0000) q=0" in out

    def test_coeffs_build_verify_roundtrip(self, tmp_path):
        path = str(tmp_path / "c.flc")
        code, out = run_cli("coeffs", "build", "--weights", "0,1", "--p", "2",
                            "--path", path)
        assert code == 0
        assert "wrote 9 records" in out
        code, out = run_cli("coeffs", "verify", "--weights", "0,1", "--p", "2",
                            "--path", path, "--samples", "9")
        assert code == 0
        assert "verified 9 records" in out

    def test_coeffs_overwrite_refused(self, tmp_path):
        path = str(tmp_path / "c.flc")
        assert run_cli("coeffs", "build", "--weights", "0", "--p", "1", "--path", path)[0] == 0
        assert run_cli("coeffs", "build", "--weights", "0", "--p", "1", "--path", path)[0] == 1
        assert run_cli("coeffs", "build", "--weights", "0", "--p", "1", "--path", path,
                       "--force")[0] == 0

    def test_coeffs_store_env(self, tmp_path, monkeypatch):
        monkeypatch.setenv("STOCHTAYLOR_STORE", str(tmp_path))
        code, out = run_cli("coeffs", "build", "--weights", "0,0", "--p", "1")
        assert code == 0
        assert str(tmp_path) in out

    def test_mse_output(self):
        code, out = run_cli("mse", "--spec", "00", "--i", "1,2", "--p", "0",
                            "--step", "1", "--paths", "4000", "--grid", "128",
                            "--seed", "3")
        assert code == 0
        assert "exact 0.25" in out
        lines = dict(l.split(None, 1) for l in out.splitlines()[1:])
        assert abs(float(lines["z"])) < 6.0

    def test_check_hypothesis(self):
        code, out = run_cli("check", "--weights", "0,1", "--order-exp", "5",
                            "--step", "0.005")
        assert code == 0
        assert "distinct q = 8" in out
        assert "dominated" in out.splitlines()[-1]

    def test_integrate(self):
        code, out = run_cli("integrate", "--scheme", "milstein", "--problem", "gbm",
                            "--h", "0.25", "--T", "1", "--paths", "500", "--seed", "4")
        assert code == 0
        assert "strong_error" in out

    def test_order(self):
        code, out = run_cli("order", "--scheme", "euler", "--problem", "gbm",
                            "--steps", "0.125,0.0625,0.03125", "--paths", "500",
                            "--seed", "4")
        assert code == 0
        assert "slope" in out.splitlines()[-1]
