import csv
import io
import json
import subprocess
import sys

import pytest

from iwaops.cli import main
from iwaops.serialize import canonical_json


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestClassify:
    def test_e56_json(self, capsys):
        code, out, _ = run_cli(capsys, "classify", "--form", "e56", "--json")
        assert code == 0
        payload = json.loads(out)
        assert payload["active"] == ["W4plus"]
        assert payload["rank"] == 4
        assert payload["mn"] == [0, 2]
        assert payload["moment"] == [0.0, 0.0, 1.0]

    def test_e12(self, capsys):
        code, out, _ = run_cli(capsys, "classify", "--form", "e12", "--json")
        payload = json.loads(out)
        assert code == 0
        assert payload["active"] == ["W5"]
        assert payload["mn"] == [2, 0]
        assert payload["integrable_h"] is True

    def test_not_simple_exit_3(self, capsys):
        code, _, err = run_cli(capsys, "classify", "--form", "e12 + e34")
        assert code == 3
        assert "simple" in err

    def test_parse_error_exit_2(self, capsys):
        code, _, err = run_cli(capsys, "classify", "--form", "bogus")
        assert code == 2

    def test_json_round_trip_byte_identical(self, capsys):
        _, out, _ = run_cli(capsys, "classify", "--form", "0.6 e15 + 0.8 e25", "--json")
        reparsed = json.loads(out)
        assert canonical_json(reparsed) == out.strip()

    def test_header_reports_defaults(self, capsys):
        _, out, _ = run_cli(capsys, "classify", "--form", "e56")
        head = out.splitlines()[0]
        assert head.startswith("#") and "tolerance=" in head and "seed=" in head


class TestSweepCommand:
    def test_standard_vertical(self, capsys):
        code, out, _ = run_cli(
            capsys, "sweep", "--family", "standard-vertical", "--samples", "2", "--json"
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["histogram"] == {"W4plus": 2}
        assert payload["violations"] == []

    def test_unknown_family(self, capsys):
        code, _, err = run_cli(capsys, "sweep", "--family", "whatever")
        assert code == 2
        assert "unknown family" in err


class TestMomentCommand:
    def test_csv_output(self, tmp_path, capsys):
        out_path = tmp_path / "cloud.csv"
        code, _, _ = run_cli(
            capsys,
            "moment", "--family", "geodesic-spheres",
            "--samples", "50", "--seed", "3", "--out", str(out_path),
        )
        assert code == 0
        rows = list(csv.reader(open(out_path)))
        assert rows[0] == ["x", "y", "z", "signature", "rank"]
        assert len(rows) == 51
        for row in rows[1:]:
            assert abs(float(row[2])) < 1e-12
            assert row[3] == "W5"

    def test_stdout_default(self, capsys):
        code, out, _ = run_cli(
            capsys, "moment", "--family", "type11", "--samples", "3"
        )
        assert code == 0
        rows = list(csv.reader(io.StringIO(out)))
        assert len(rows) == 4

    def test_deterministic_for_seed(self, tmp_path, capsys):
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        for path in (a, b):
            run_cli(
                capsys,
                "moment", "--family", "vslice",
                "--samples", "20", "--seed", "11", "--out", str(path),
            )
        assert a.read_text() == b.read_text()


class TestVerifyCommand:
    def test_json_report_structure(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "--json")
        payload = json.loads(out)
        names = {c["name"] for c in payload["criteria"]}
        assert "connection-table" in names
        assert "moment-theorem" in names
        failed = [c for c in payload["criteria"] if not c["passed"]]
        assert [c["name"] for c in failed] == ["itv-sweep-type11"]
        assert code == 1

    def test_corrupted_algebra_reports_jacobi(self, tmp_path, capsys):
        # d e6 = e35 with d e5 = e12 gives d(d e6) = -e123 != 0
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"d": {"e5": "+1 e12", "e6": "+1 e35"}}))
        code, out, _ = run_cli(capsys, "verify", "--algebra", str(bad), "--json")
        assert code == 1
        payload = json.loads(out)
        structure = next(
            c for c in payload["criteria"] if c["name"] == "structure-equations"
        )
        assert not structure["passed"]
        assert "Jacobi" in structure["detail"]


class TestConnectionCommand:
    def test_exact_json(self, capsys):
        code, out, _ = run_cli(capsys, "connection", "--json")
        assert code == 0
        payload = json.loads(out)
        assert payload["nabla"]["e5"] == {
            "1,3": "1/2", "2,4": "-1/2", "3,1": "-1/2", "4,2": "1/2"
        }
        assert payload["nabla"]["e1"] == {
            "3,5": "1/2", "4,6": "1/2", "5,3": "1/2", "6,4": "1/2"
        }


def test_console_script_installed():
    proc = subprocess.run(
        [sys.executable, "-m", "iwaops.cli", "classify", "--form", "e56", "--json"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["active"] == ["W4plus"]


def test_env_seed_override(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("ITV_SEED", "77")
    code, out, _ = run_cli(capsys, "sweep", "--family", "generic", "--samples", "5", "--json")
    assert code == 0
    assert json.loads(out)["family"]["seed"] == 77
