import json
import subprocess
import sys

import pytest

from tmemu.cli import main


def run_cli(*argv, capsys=None):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestScore:
    def test_half(self, capsys):
        code, out, _ = run_cli("score", "--x", "1", "--a", "1", capsys=capsys)
        assert code == 0
        assert out.strip() == "0.5"

    def test_bad_belief_is_runtime_error(self, capsys):
        code, _, err = run_cli("score", "--x", "1", "--a", "2", capsys=capsys)
        assert code == 3
        assert "error" in err


class TestBBSearch:
    def test_2_2_json(self, capsys):
        code, out, _ = run_cli("bb-search", "2", "2", "--cutoff", "1000", capsys=capsys)
        assert code == 0
        record = json.loads(out)
        assert record["s_steps"] == 6
        assert record["sigma"] == 4
        assert record["provenance"] == "searched"

    def test_budget_error_exit_code(self, capsys):
        code, _, err = run_cli("bb-search", "4", "2", "--cutoff", "10", capsys=capsys)
        assert code == 3
        assert "budget" in err.lower() or "desk" in err.lower()


class TestRun:
    def test_registry_machine_diagram(self, capsys):
        code, out, _ = run_cli(
            "run", "--space", "2", "2", "--registry", "--steps", "10", capsys=capsys
        )
        assert code == 0
        lines = out.splitlines()
        meta = [ln for ln in lines if ln.startswith("#")]
        rows = [ln for ln in lines if not ln.startswith("#")]
        assert any("outcome halted[6]" in ln for ln in meta)
        assert len(rows) == 11
        assert len(set(len(r) for r in rows)) == 1

    def test_explicit_input(self, capsys):
        code, out, _ = run_cli(
            "run", "--space", "2", "2", "--rule", "0", "--steps", "1",
            "--input", "11", capsys=capsys,
        )
        assert code == 0
        rows = [ln for ln in out.splitlines() if not ln.startswith("#")]
        assert rows[0] == "11"
        assert rows[1] == "01"  # rule 0 blanks the read cell and halts


class TestTransforms:
    def test_count_only(self, capsys):
        code, out, _ = run_cli("transforms", "3", "2", capsys=capsys)
        assert code == 0
        assert out.strip() == "504"

    def test_listing(self, capsys):
        code, out, _ = run_cli("transforms", "2", "1", "--all", capsys=capsys)
        lines = out.strip().splitlines()
        assert lines[0] == "2"
        assert lines[1:] == ["1: 0 1", "2: 1 0"]


class TestEmulate:
    def test_self_emulation_present(self, capsys):
        code, out, _ = run_cli(
            "emulate", "--space", "2", "2", "--registry", "--blocks", "1",
            "--m", "3", "--candidates", "5", "--initial", "101", capsys=capsys,
        )
        assert code == 0
        assert out.splitlines()[0].startswith("emulator_rule,")


class TestExperiment:
    def test_missing_config_file(self, capsys):
        code, _, err = run_cli("experiment", "--config", "/no/such/file", capsys=capsys)
        assert code == 3
        assert "error" in err

    def test_tiny_experiment(self, capsys, tmp_path):
        cfg = tmp_path / "exp.cfg"
        cfg.write_text(
            "space = 2 2\nemulator = registry\nrandom_emulators = 2\n"
            "candidate_sample = 10\nblock_sizes = 1\nm = 2\n"
            "initial = explicit 101\nseed = 3\nbelief = 1.0\n"
        )
        code, out, _ = run_cli(
            "--out", str(tmp_path / "res"), "experiment", "--config", str(cfg),
            capsys=capsys,
        )
        assert code == 0
        assert (tmp_path / "res" / "summary.json").exists()
        summary = json.loads(out)
        assert "verdicts" in summary

    def test_config_error_is_runtime_exit(self, capsys, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("space = 2\n")
        code, _, err = run_cli(
            "--out", str(tmp_path / "res"), "experiment", "--config", str(cfg),
            capsys=capsys,
        )
        assert code == 3


class TestBehaviourCommand:
    def test_single_input_csv(self, capsys, tmp_path):
        code, _, _ = run_cli(
            "--out", str(tmp_path), "behaviour", "--space", "2", "2", "--registry",
            "--inputs", "1", "1", "--steps", "20", capsys=capsys,
        )
        assert code == 0
        lines = [
            ln for ln in (tmp_path / "behaviour.csv").read_text().splitlines()
            if ln and not ln.startswith("#")
        ]
        assert len(lines) == 2

    def test_unknown_registry_machine(self, capsys, tmp_path):
        code, _, err = run_cli(
            "--out", str(tmp_path), "behaviour", "--space", "9", "9", "--registry",
            capsys=capsys,
        )
        assert code == 3
        assert "registry" in err


class TestUsageErrors:
    def test_no_command_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            main([])
        assert exc.value.code == 2

    def test_unknown_command_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2

    def test_installed_entry_point(self):
        proc = subprocess.run(
            [sys.executable, "-m", "tmemu.cli", "score", "--x", "4", "--a", "0.5"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert proc.stdout.strip().startswith("0.666666")
