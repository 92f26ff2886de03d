"""Command-line interface tests: exit codes, formats, piping."""

import io
import json
import subprocess
import sys

from hydiag.cli import main
from hydiag.quotient import load_model, loads_model, save_model

from .conftest import FIXTURES
from .helpers import make_model

Q1 = str(FIXTURES / "q1.quot.json")
Q2 = str(FIXTURES / "q2.quot.json")
BAD_D1 = str(FIXTURES / "bad-d1.quot.json")
TA1 = str(FIXTURES / "ta1.ta.json")


class TestCheck:
    def test_q1_diagnosable_exit_zero(self, capsys):
        assert main(["check", Q1]) == 0
        out = capsys.readouterr().out.splitlines()
        assert out[0] == "diagnosable"

    def test_q2_not_diagnosable_exit_two(self, capsys):
        assert main(["check", Q2]) == 2
        out = capsys.readouterr().out.splitlines()
        assert out[0] == "not diagnosable"
        assert out[1] == "prefix: o0 tick o1"
        assert out[2] == "cycle: o1 tick o0 tick o1"

    def test_invalid_model_exit_one(self, capsys):
        assert main(["check", BAD_D1]) == 1
        assert "D1" in capsys.readouterr().out

    def test_not_progressive_exit_three(self, tmp_path, capsys):
        model = make_model(
            [(False, True, 0), (True, False, 0)],
            [(0, "tick", 0), (0, "f", 1)],
        )
        path = tmp_path / "dead.quot.json"
        save_model(model, path)
        assert main(["check", str(path)]) == 3
        assert "not progressive" in capsys.readouterr().out

    def test_json_format(self, capsys):
        assert main(["check", Q2, "--format", "json"]) == 2
        payload = json.loads(capsys.readouterr().out)
        assert payload["progressive"] is True
        assert payload["diagnosable"] is False
        assert payload["witness"]["cycle"]["steps"] == [["tick", 0], ["tick", 1]]

    def test_json_format_diagnosable(self, capsys):
        assert main(["check", Q1, "--format", "json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload == {
            "progressive": True,
            "diagnosable": True,
            "witness": None,
            "delay_bound": 1,
        }


class TestValidate:
    def test_ok(self, capsys):
        assert main(["validate", Q1]) == 0
        assert capsys.readouterr().out.strip() == "ok"

    def test_bad_d1_lists_rule(self, capsys):
        assert main(["validate", BAD_D1]) == 1
        assert "D1" in capsys.readouterr().out

    def test_json_round_trips(self, capsys):
        assert main(["validate", BAD_D1, "--format", "json"]) == 1
        payload = json.loads(capsys.readouterr().out)
        assert payload["ok"] is False
        assert payload["violations"][0]["rule"] == "D1"

    def test_missing_file(self, capsys):
        assert main(["validate", "no-such-file.json"]) == 1

    def test_malformed_json(self, tmp_path, capsys):
        path = tmp_path / "junk.json"
        path.write_text("{]")
        assert main(["validate", str(path)]) == 1


class TestRegionsPipeline:
    def test_regions_writes_a_model(self, tmp_path, capsys):
        out = tmp_path / "ta1.quot.json"
        assert main(["regions", TA1, "-o", str(out)]) == 0
        model = load_model(out)
        assert len(model.classes) == 6

    def test_regions_to_stdout(self, capsys):
        assert main(["regions", TA1]) == 0
        model = loads_model(capsys.readouterr().out)
        assert len(model.classes) == 6

    def test_ta_flag_equivalent_to_regions(self, tmp_path, capsys):
        out = tmp_path / "ta1.quot.json"
        main(["regions", TA1, "-o", str(out)])
        capsys.readouterr()
        assert main(["check", str(out)]) == 0
        direct = capsys.readouterr().out
        assert main(["check", TA1, "--ta"]) == 0
        assert capsys.readouterr().out == direct

    def test_cap_exceeded_exit_five(self, capsys):
        assert main(["regions", TA1, "--max-classes", "3"]) == 5

    def test_cap_env_var(self, capsys, monkeypatch):
        monkeypatch.setenv("HYDIAG_MAX_CLASSES", "3")
        assert main(["regions", TA1]) == 5
        monkeypatch.setenv("HYDIAG_MAX_CLASSES", "100")
        assert main(["regions", TA1]) == 0

    def test_flag_overrides_env(self, capsys, monkeypatch):
        monkeypatch.setenv("HYDIAG_MAX_CLASSES", "3")
        assert main(["regions", TA1, "--max-classes", "50"]) == 0


class TestEstimatorExport:
    def test_export_file(self, tmp_path):
        out = tmp_path / "q1.est.json"
        assert main(["estimator", Q1, "-o", str(out)]) == 0
        data = json.loads(out.read_text())
        assert set(data) == {"states", "initials", "transitions"}
        assert len(data["states"]) == 4

    def test_invalid_input_exit_one(self, capsys):
        assert main(["estimator", BAD_D1]) == 1


class TestRunCommand:
    def synthesize(self, tmp_path, source=Q1):
        out = tmp_path / "diag.json"
        assert main(["synthesize", source, "-o", str(out)]) == 0
        return out

    def test_event_stream(self, tmp_path, capsys, monkeypatch):
        diag = self.synthesize(tmp_path)
        monkeypatch.setattr(
            sys, "stdin", io.StringIO("init o0\ntick o1\ntick o1\ntick o1\n")
        )
        assert main(["run", str(diag)]) == 0
        assert capsys.readouterr().out.splitlines() == [
            "no determinate-nonfaulty",
            "no determinate-nonfaulty",
            "yes determinate-faulty",
            "yes determinate-faulty",
        ]

    def test_bare_integer_observables(self, tmp_path, capsys, monkeypatch):
        diag = self.synthesize(tmp_path)
        monkeypatch.setattr(sys, "stdin", io.StringIO("init 0\ntick 1\n"))
        assert main(["run", str(diag)]) == 0

    def test_inconsistent_stream_exit_four(self, tmp_path, capsys, monkeypatch):
        diag = self.synthesize(tmp_path)
        monkeypatch.setattr(sys, "stdin", io.StringIO("init o0\ntick o0\ntick o1\n"))
        assert main(["run", str(diag)]) == 4
        err = capsys.readouterr().err
        assert "inconsistent at event 2" in err

    def test_malformed_line_exit_one(self, tmp_path, capsys, monkeypatch):
        diag = self.synthesize(tmp_path)
        monkeypatch.setattr(sys, "stdin", io.StringIO("boom\n"))
        assert main(["run", str(diag)]) == 1


class TestOracleCommand:
    def test_q1(self, capsys):
        assert main(["oracle", Q1]) == 0
        out = capsys.readouterr().out
        assert out.splitlines()[0] == "diagnosable"
        assert "utrace agreement up to depth 4: ok" in out

    def test_q2_counterexample(self, capsys):
        assert main(["oracle", Q2]) == 2
        out = capsys.readouterr().out
        assert "shared cycle: o1 tick o0 tick o1" in out

    def test_json(self, capsys):
        assert main(["oracle", Q2, "--format", "json"]) == 2
        payload = json.loads(capsys.readouterr().out)
        assert payload["diagnosable"] is False
        assert payload["counterexample"]["left"]["cycle"] == [3, 2, 3]


class TestFuzzCommand:
    def test_small_suite(self, capsys):
        assert main(["fuzz", "--models", "20", "--seed", "3"]) == 0
        out = capsys.readouterr().out
        assert "models tested: 20, agreements: 20" in out


class TestUsage:
    def test_usage_error_exits_one(self, capsys):
        assert main(["frobnicate"]) == 1

    def test_help_exits_zero(self, capsys):
        assert main(["--help"]) == 0

    def test_module_entry_point(self):
        proc = subprocess.run(
            [sys.executable, "-m", "hydiag", "check", Q1],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert proc.stdout.splitlines()[0] == "diagnosable"
