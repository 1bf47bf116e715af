import json
import subprocess
import sys

import pytest

from mondrian.cli import RunConfig, dispatch, main, parse_args
from mondrian.tiling import tiling_from_json, verify_tiling


def run_cli(args, env_extra=None):
    import os

    env = dict(os.environ)
    env.pop("MONDRIAN_THREADS", None)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        [sys.executable, "-m", "mondrian", *args],
        capture_output=True,
        env=env,
    )


class TestParseArgs:
    def test_solve_defaults(self):
        cfg = parse_args(["solve", "--n", "6"])
        assert cfg == RunConfig(
            command="solve", n=6, node_budget=10**8, output_format="text", worker_count=1
        )

    def test_census_csv(self):
        cfg = parse_args(["census", "--x", "1000000", "--format", "csv"])
        assert cfg.command == "census" and cfg.x == 10**6
        assert cfg.output_format == "csv"

    def test_verify_oeis_range(self, bfile_path):
        cfg = parse_args(
            ["verify-oeis", "--bfile", str(bfile_path), "--from", "3", "--to", "10"]
        )
        assert (cfg.from_n, cfg.to_n) == (3, 10)

    def test_bad_integer_exits_2(self):
        with pytest.raises(SystemExit) as e:
            parse_args(["solve", "--n", "abc"])
        assert e.value.code == 2

    def test_unknown_flag_rejected(self):
        with pytest.raises(SystemExit) as e:
            parse_args(["solve", "--n", "6", "--frobnicate"])
        assert e.value.code == 2

    def test_missing_required_flag(self):
        with pytest.raises(SystemExit) as e:
            parse_args(["solve"])
        assert e.value.code == 2

    def test_out_of_range_values(self):
        for args in (
            ["solve", "--n", "2"],
            ["census", "--x", "10"],
            ["rough", "--x", "0"],
            ["solve", "--n", "6", "--budget", "0"],
            ["solve", "--n", "6", "--workers", "0"],
            ["verify-oeis", "--bfile", "x", "--from", "2", "--to", "5"],
        ):
            with pytest.raises(SystemExit):
                parse_args(args)

    def test_format_availability_per_command(self):
        with pytest.raises(SystemExit):
            parse_args(["solve", "--n", "6", "--format", "csv"])
        with pytest.raises(SystemExit):
            parse_args(["chain", "--x", "100", "--format", "csv"])

    def test_env_workers(self, monkeypatch):
        monkeypatch.setenv("MONDRIAN_THREADS", "3")
        assert parse_args(["rough", "--x", "10"]).worker_count == 3

    def test_flag_wins_over_env(self, monkeypatch):
        monkeypatch.setenv("MONDRIAN_THREADS", "3")
        assert parse_args(["rough", "--x", "10", "--workers", "2"]).worker_count == 2

    def test_bad_env_workers(self, monkeypatch):
        monkeypatch.setenv("MONDRIAN_THREADS", "many")
        with pytest.raises(SystemExit):
            parse_args(["rough", "--x", "10"])


class TestDispatch:
    def test_solve_json_round_trips(self, capsys):
        rc = main(["solve", "--n", "6", "--format", "json"])
        assert rc == 0
        out = capsys.readouterr().out
        cert = tiling_from_json(out)
        assert cert.defect == 5
        assert verify_tiling(cert).valid

    def test_perfect_text_verdict(self, capsys):
        rc = main(["perfect", "--n", "3"])
        assert rc == 0
        assert capsys.readouterr().out == "FilterExcluded\n"

    def test_perfect_json(self, capsys):
        rc = main(["perfect", "--n", "6", "--format", "json"])
        assert rc == 0
        obj = json.loads(capsys.readouterr().out)
        assert obj["verdict"] == "Exhausted" and obj["witness_d"] == 12

    def test_rough_text(self, capsys):
        rc = main(["rough", "--x", "100", "--z", "10"])
        assert rc == 0
        assert capsys.readouterr().out == "22\n"

    def test_rough_default_z(self, capsys):
        rc = main(["rough", "--x", "100"])
        assert rc == 0
        assert capsys.readouterr().out.strip().isdigit()

    def test_census_csv_shape(self, capsys):
        rc = main(["census", "--x", "30", "--format", "csv"])
        assert rc == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0].startswith("x,z,count_p1")
        assert lines[1].split(",")[2] == "10"

    def test_chain_reports(self, capsys):
        rc = main(["chain", "--x", "100"])
        assert rc == 0
        out = capsys.readouterr().out
        assert "never asserted" in out and "chain:" in out

    def test_verify_oeis_clean(self, capsys, bfile_path):
        rc = main(["verify-oeis", "--bfile", str(bfile_path), "--from", "3", "--to", "8"])
        assert rc == 0
        assert capsys.readouterr().out.splitlines()[0] == "0 mismatches"

    def test_verify_oeis_budget_exit(self, capsys, bfile_path):
        rc = main(
            ["verify-oeis", "--bfile", str(bfile_path), "--from", "8", "--to", "8",
             "--budget", "3"]
        )
        assert rc == 1
        assert "budget exceeded" in capsys.readouterr().out

    def test_verify_oeis_detects_tamper(self, capsys, tmp_path):
        bad = tmp_path / "tampered.txt"
        bad.write_text("3 2\n4 4\n5 4\n6 4\n")
        rc = main(["verify-oeis", "--bfile", str(bad), "--from", "3", "--to", "6"])
        assert rc == 0
        out = capsys.readouterr().out
        assert "1 mismatches" in out and "n=6: computed 5, expected 4" in out

    def test_solve_budget_exit(self, capsys):
        rc = main(["solve", "--n", "8", "--budget", "5"])
        assert rc == 1
        captured = capsys.readouterr()
        assert captured.out == ""  # nothing on stdout
        assert "budget" in captured.err

    def test_missing_bfile_is_usage_error(self, capsys):
        rc = main(["verify-oeis", "--bfile", "/nonexistent", "--from", "3", "--to", "5"])
        assert rc == 2

    def test_out_path(self, capsys, tmp_path):
        target = tmp_path / "result.json"
        rc = main(["solve", "--n", "3", "--format", "json", "--out", str(target)])
        assert rc == 0
        assert capsys.readouterr().out == ""
        assert tiling_from_json(target.read_text()).defect == 2


class TestSubprocessBehavior:
    def test_usage_error_status(self):
        proc = run_cli(["solve", "--n", "abc"])
        assert proc.returncode == 2

    def test_stdout_carries_only_results(self):
        proc = run_cli(["perfect", "--n", "5"])
        assert proc.returncode == 0
        assert proc.stdout == b"FilterExcluded\n"

    @pytest.mark.parametrize(
        "args",
        [
            ["solve", "--n", "6", "--format", "json"],
            ["census", "--x", "25000", "--format", "csv"],
            ["rough", "--x", "200000", "--z", "40"],
        ],
    )
    def test_worker_count_determinism(self, args):
        one = run_cli([*args, "--workers", "1"])
        four = run_cli([*args, "--workers", "4"])
        assert one.returncode == four.returncode == 0
        assert one.stdout == four.stdout
