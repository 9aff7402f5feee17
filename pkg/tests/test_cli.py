"""End-to-end CLI contract: exit codes, formats, determinism."""

from __future__ import annotations

import csv
import io
import json
import subprocess
import sys
from pathlib import Path

import pytest


def run_cli(*args: str, timeout: float = 120.0) -> subprocess.CompletedProcess:
    return subprocess.run([sys.executable, "-m", "blochkit.cli", *args],
                          capture_output=True, text=True, timeout=timeout)


@pytest.fixture()
def product_file(tmp_path: Path) -> str:
    path = tmp_path / "product.json"
    payload = {"rotation": [1.0, 0.0],
               "zeros": [[0.3, 0.2], [-0.1, 0.4], [0.0, 0.0]]}
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)


def test_constants_json_all_pass():
    out = run_cli("constants")
    assert out.returncode == 0
    data = json.loads(out.stdout)
    assert data["all_pass"] is True
    assert len(data["constants"]) == 11
    assert {"a", "s0", "x0", "max_radius"} <= set(data["slit_disk"])


def test_constants_output_is_byte_identical():
    first = run_cli("constants")
    second = run_cli("constants")
    assert first.stdout == second.stdout
    assert first.returncode == second.returncode == 0


def test_constants_csv_format():
    out = run_cli("constants", "--output-format", "csv")
    assert out.returncode == 0
    rows = list(csv.reader(io.StringIO(out.stdout)))
    assert rows[0] == ["name", "value", "reference", "abs_err", "status"]
    assert len(rows) == 12
    assert all(row[4] == "PASS" for row in rows[1:])


def test_constants_tight_tolerance_fails():
    out = run_cli("constants", "--tolerance", "r0=1e-12")
    assert out.returncode == 1
    data = json.loads(out.stdout)
    statuses = {row["name"]: row["status"] for row in data["constants"]}
    assert statuses["r0"] == "FAIL"
    assert data["all_pass"] is False


def test_unknown_tolerance_is_usage_error():
    out = run_cli("constants", "--tolerance", "bogus=1")
    assert out.returncode == 2
    out = run_cli("constants", "--tolerance", "r0")
    assert out.returncode == 2


def test_missing_subcommand_is_usage_error():
    assert run_cli().returncode == 2
    assert run_cli("bogus").returncode == 2


def test_seminorm_subcommand(product_file):
    out = run_cli("seminorm", "--input", product_file)
    assert out.returncode == 0
    data = json.loads(out.stdout)
    assert 0.0 < data["estimate"]["value"] <= 1.0 + 1e-9
    assert len(data["product"]["zeros"]) == 3


def test_seminorm_bad_inputs(tmp_path):
    assert run_cli("seminorm", "--input", str(tmp_path / "missing.json")).returncode == 2
    broken = tmp_path / "broken.json"
    broken.write_text("{not json", encoding="utf-8")
    assert run_cli("seminorm", "--input", str(broken)).returncode == 2
    outside = tmp_path / "outside.json"
    outside.write_text(json.dumps({"zeros": [[1.5, 0.0]]}), encoding="utf-8")
    assert run_cli("seminorm", "--input", str(outside)).returncode == 2


def test_sweep_json_and_determinism():
    first = run_cli("sweep", "--count", "12", "--max-degree", "6")
    second = run_cli("sweep", "--count", "12", "--max-degree", "6")
    assert first.returncode == 0
    assert first.stdout == second.stdout
    data = json.loads(first.stdout)
    assert data["count"] == 12
    assert data["violations"] == 0
    assert data["min"] <= data["mean"] <= data["max"] <= 1.0 + 1e-9
    assert data["minimizer"]["value"] == data["min"]


def test_sweep_csv_rows():
    out = run_cli("sweep", "--count", "7", "--output-format", "csv")
    assert out.returncode == 0
    rows = list(csv.reader(io.StringIO(out.stdout)))
    assert rows[0] == ["trial", "degree", "law", "value", "status"]
    assert len(rows) == 8
    laws = {row[2] for row in rows[1:]}
    assert laws == {"uniform_disk", "boundary_concentrated"}


def test_sweep_violation_exit_code():
    # an impossible floor (above 1) forces every trial to count as a violation
    out = run_cli("sweep", "--count", "3", "--tolerance", "violation_margin=-0.5")
    assert out.returncode == 1
    data = json.loads(out.stdout)
    assert data["violations"] == 3


def test_theorem4_subcommand(product_file):
    out = run_cli("theorem4", "--input", product_file)
    assert out.returncode == 0
    data = json.loads(out.stdout)
    assert data["certified"] is True
    assert data["meets_007_delta"] is True
    result = data["result"]
    assert result["actual_value"] >= result["guaranteed_bound"] - 1e-9
    assert set(data["margins"]) == {"separation_margin", "cofactor_margin",
                                    "base_modulus_margin"}


def test_theorem4_d_variants(product_file):
    eighth = run_cli("theorem4", "--input", product_file, "--d", "0.125")
    assert eighth.returncode == 0
    bad = run_cli("theorem4", "--input", product_file, "--delta-override", "2.0")
    assert bad.returncode == 1
    inadmissible = run_cli("theorem4", "--input", product_file, "--d", "0.75")
    assert inadmissible.returncode == 1


def test_analyze_subcommand(product_file):
    out = run_cli("analyze", "--input", product_file)
    assert out.returncode == 0
    data = json.loads(out.stdout)
    report = data["report"]
    assert len(report["critical_points"]) == 2
    assert report["case_label"] in ("SLIT_DISK", "SURFACE_CASE", "DEGENERATE")
    assert data["seminorm_estimate"]["value"] > 0.0


def test_analyze_perturb_path(tmp_path):
    path = tmp_path / "sym.json"
    path.write_text(json.dumps({"zeros": [[0.5, 0.0], [-0.5, 0.0],
                                          [0.0, 0.4], [0.0, -0.4]]}),
                    encoding="utf-8")
    plain = run_cli("analyze", "--input", str(path))
    assert plain.returncode == 0
    assert json.loads(plain.stdout)["report"]["case_label"] == "DEGENERATE"
    perturbed = run_cli("analyze", "--input", str(path), "--perturb")
    assert perturbed.returncode == 0
    report = json.loads(perturbed.stdout)["report"]
    assert report["case_label"] != "DEGENERATE"
    assert len(report["sheet_edges"]) == 3


def test_surface_subcommand_with_csv():
    out = run_cli("surface", "--starts", "2", "--csv")
    assert out.returncode == 0
    json_part, csv_part = out.stdout.split("}\n", 1)
    data = json.loads(json_part + "}")
    assert abs(data["c"] - 1.098259) < 1e-4
    assert abs(data["d"] - 1.766556) < 1e-4
    rows = list(csv.reader(io.StringIO(csv_part)))
    assert rows[0] == ["nodes", "height_integral", "width_integral"]
    assert [int(r[0]) for r in rows[1:]] == [32, 64, 128, 256, 512, 1024]
