"""End-to-end coverage for the command-line driver.

Most cases call main(argv) in process for speed; one subprocess case checks
the installed entry point behaves the same way.
"""

from __future__ import annotations

import json
import subprocess
import sys

import pytest

from cqg.cli import main
from cqg.rep_data import model_to_document

REPORT_KEYS = ["command", "model", "parameters", "results", "violations", "truncations"]


def run_cli(capsys, *argv: str):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv: str):
    code, out, err = run_cli(capsys, *argv, "--format", "json")
    assert err == ""
    return code, json.loads(out)


def walk_floats(node):
    if isinstance(node, float):
        yield node
    elif isinstance(node, dict):
        for v in node.values():
            yield from walk_floats(v)
    elif isinstance(node, list):
        for v in node:
            yield from walk_floats(v)


class TestExitCodeZero:
    def test_models_listing(self, capsys):
        code, report = run_json(capsys, "models")
        assert code == 0
        assert list(report) == REPORT_KEYS
        names = [row["builtin"] for row in report["results"] if "builtin" in row]
        assert names == ["su_q_2", "s3", "cyclic<n>", "free_orthogonal"]

    def test_models_with_selection(self, capsys):
        code, report = run_json(capsys, "models", "--model", "s3")
        assert code == 0
        selected = [row for row in report["results"] if "selected" in row]
        assert selected and selected[0]["dims"] == [1, 1, 2]

    def test_dims_reference_table(self, capsys):
        code, report = run_json(
            capsys, "dims", "--model", "su_q_2", "--q", "0.5",
            "--max-level", "2", "--t", "0,1,2",
        )
        assert code == 0
        rows = [
            (r["label"], r["d_0"], r["d_1"], r["d_2"]) for r in report["results"]
        ]
        assert rows == [
            ("0", 1.0, 1.0, 1.0),
            ("1", 2.0, 2.5, 4.25),
            ("2", 3.0, 5.25, 17.0625),
        ]

    def test_verify_theorem_sweep_clean(self, capsys):
        code, report = run_json(
            capsys, "verify", "theorem-5.3", "--model", "su_q_2", "--q", "0.5",
            "--max-level", "4", "--tol", "1e-9",
        )
        assert code == 0
        assert report["violations"] == []
        assert report["results"]
        # pairs near the truncation level cannot be decided and land in truncations
        assert all("alpha" in row for row in report["truncations"])

    def test_kac_detection(self, capsys):
        code, report = run_json(capsys, "kac", "--model", "builtin:s3")
        assert code == 0
        head = report["results"][0]
        assert head["kac"] is True
        assert head["n_g"] == 2
        assert head["n_g_is_lower_bound"] is False

    def test_fusion_single_pair(self, capsys):
        code, report = run_json(
            capsys, "fusion", "--model", "su_q_2", "--max-level", "4",
            "--left", "1", "--right", "2",
        )
        assert code == 0
        row = report["results"][0]
        assert row["components"] == {"1": 1, "3": 1}
        assert row["total_dim"] == 6

    def test_cg_unitarity_report(self, capsys):
        code, report = run_json(
            capsys, "cg", "--model", "su_q_2", "--max-level", "4",
            "--beta", "1", "--gamma", "1",
        )
        assert code == 0
        tail = report["results"][-1]
        assert tail["max_residual"] <= 1e-9

    def test_asymmetric_spectrum_reported_not_flagged(self, capsys):
        # asymmetry is only a violation for self-conjugate irreps; f is not one
        code, report = run_json(
            capsys, "verify", "symmetry", "--model", "free_orthogonal",
            "--f-diag", "1,1,2",
        )
        assert code == 0
        rows = {row["label"]: row for row in report["results"]}
        assert rows["f"]["symmetric"] is False
        assert rows["f"]["verdict"] == "no_conclusion"

    def test_growth_inequality(self, capsys):
        code, report = run_json(
            capsys, "verify", "growth", "--model", "su_q_2", "--max-level", "8",
            "--alpha", "1,2", "--n", "1,2", "--t", "2,3",
        )
        assert code == 0
        assert report["violations"] == []
        assert all(row["pass"] for row in report["results"])


class TestExitCodeOne:
    def test_bounded_degree_witness(self, capsys):
        code, report = run_json(capsys, "bounded-degree", "--model", "builtin:s3", "--r", "3")
        assert code == 1
        violation = report["violations"][0]
        assert violation["check"] == "bounded-degree"
        assert violation["witness"]["kind"] == "matrix_units"

    def test_dimension_witness(self, capsys):
        code, report = run_json(
            capsys, "explore", "corollary-6.5", "--model", "su_q_2",
            "--word", "1:1", "--bound", "2", "--budget", "20",
        )
        assert code == 1
        violation = report["violations"][0]
        assert violation["check"] == "dimension-witness"
        assert violation["dim"] >= 3

    def test_consistency_violation_in_input(self, capsys, tmp_path, suq2_half):
        doc = json.loads(json.dumps(model_to_document(suq2_half)))
        doc["irreps"][1]["rho"] = [2.0, 1.0]
        path = tmp_path / "unbalanced.json"
        path.write_text(json.dumps(doc), encoding="utf-8")
        code, out, err = run_cli(capsys, "spectra", "--model", str(path))
        assert code == 1
        assert out == ""
        assert err.startswith("consistency violation:")


class TestExitCodeTwo:
    @pytest.mark.parametrize(
        "argv, needle",
        [
            (("dims", "--model", "no_such_model"), "unknown built-in"),
            (("cg", "--model", "s3"), "--beta"),
            (("dims", "--model", "s3", "--t", "1,x"), "comma-separated"),
            (("kac", "--model", "s3", "--tol", "-1"), "--tol must be positive"),
            (("verify", "growth", "--model", "s3", "--n", "1.5"), "integers"),
            (("fusion", "--model", "s3", "--left", "std"), "together"),
            (("explore", "main-theorem", "--model", "s3", "--alpha0", "std"), ""),
            (("fusion", "--model", "su_q_2", "--max-level", "2",
              "--left", "2", "--right", "9"), "unknown irrep"),
        ],
    )
    def test_usage_errors(self, capsys, argv, needle):
        code, out, err = run_cli(capsys, *argv)
        assert code == 2
        assert out == ""
        assert err.startswith("error:")
        assert needle in err

    def test_missing_model_file(self, capsys, tmp_path):
        path = tmp_path / "missing.json"
        code, out, err = run_cli(capsys, "dims", "--model", str(path))
        assert code == 2
        assert err.startswith("error:")


class TestFormats:
    def test_report_key_order(self, capsys):
        _, report = run_json(capsys, "spectra", "--model", "s3")
        assert list(report) == REPORT_KEYS
        assert report["command"] == "spectra"
        assert report["model"] == "dual(s3)"

    def test_csv_sections_and_values(self, capsys):
        code, out, err = run_cli(
            capsys, "dims", "--model", "su_q_2", "--q", "0.5", "--max-level", "2",
            "--t", "0,1,2", "--format", "csv",
        )
        assert code == 0 and err == ""
        lines = out.splitlines()
        assert lines[0] == "## results"
        assert lines[1] == "label,dim,d_0,d_1,d_2"
        assert lines[3] == "1,2,2,2.5,4.25"
        assert "## violations" in lines and "## truncations" in lines

    def test_table_format_prose(self, capsys):
        code, out, err = run_cli(capsys, "kac", "--model", "cyclic5")
        assert code == 0 and err == ""
        assert out.startswith("command: kac\n")
        assert "model: dual(cyclic5)" in out
        assert "violations (0):" in out

    def test_floats_carry_twelve_significant_digits(self, capsys):
        _, report = run_json(
            capsys, "verify", "theorem-5.3", "--model", "su_q_2", "--q", "0.8",
            "--max-level", "3", "--alpha", "1", "--beta", "2",
        )
        seen = 0
        for value in walk_floats(report):
            assert value == float(f"{value:.12g}")
            seen += 1
        assert seen > 0

    def test_out_redirects_stdout(self, capsys, tmp_path):
        target = tmp_path / "report.json"
        code, out, err = run_cli(
            capsys, "spectra", "--model", "s3", "--format", "json",
            "--out", str(target),
        )
        assert code == 0 and out == "" and err == ""
        report = json.loads(target.read_text(encoding="utf-8"))
        assert list(report) == REPORT_KEYS


class TestExportRoundTrip:
    def test_export_then_reuse(self, capsys, tmp_path):
        target = tmp_path / "model.json"
        code, out, err = run_cli(
            capsys, "export", "--model", "su_q_2", "--q", "0.5",
            "--max-level", "3", "--include-cg", "--out", str(target),
        )
        assert code == 0 and out == "" and err == ""
        document = json.loads(target.read_text(encoding="utf-8"))
        assert document["name"] == "su_q_2(q=0.5,max_level=3)"
        assert "cg" in document

        code, report = run_json(
            capsys, "cg", "--model", str(target), "--beta", "1", "--gamma", "1"
        )
        assert code == 0
        assert report["results"][-1]["max_residual"] <= 1e-9

        code, report = run_json(
            capsys, "verify", "haar-modular", "--model", str(target), "--alpha", "1"
        )
        assert code == 0
        assert report["violations"] == []

    def test_export_without_cg(self, capsys, tmp_path):
        target = tmp_path / "plain.json"
        code, _, _ = run_cli(
            capsys, "export", "--model", "cyclic5", "--out", str(target)
        )
        assert code == 0
        document = json.loads(target.read_text(encoding="utf-8"))
        assert "cg" not in document

        code, _, err = run_cli(
            capsys, "cg", "--model", str(target), "--beta", "1", "--gamma", "1"
        )
        assert code == 2
        assert err.startswith("error:")


class TestDeterminism:
    def test_random_strategy_reports_identical(self, capsys):
        argv = (
            "bounded-degree", "--model", "su_q_2", "--max-level", "2",
            "--r", "5", "--seed", "42", "--trials", "300",
        )
        first_code, first = run_cli(capsys, *argv, "--format", "json")[:2]
        second_code, second = run_cli(capsys, *argv, "--format", "json")[:2]
        assert first_code == second_code == 1
        assert first == second

    def test_subprocess_entry_point(self):
        argv = [
            sys.executable, "-m", "cqg.cli", "verify", "theorem-5.3",
            "--model", "su_q_2", "--max-level", "2", "--format", "json",
        ]
        first = subprocess.run(argv, capture_output=True, timeout=120)
        second = subprocess.run(argv, capture_output=True, timeout=120)
        assert first.returncode == second.returncode == 0
        assert first.stdout == second.stdout
        assert first.stdout.strip().endswith(b"}")
