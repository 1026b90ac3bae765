import csv
import io
import json
from pathlib import Path

from symsep.io.sweep_export import SWEEP_COLUMNS, export_sweeps, format_number, write_sweep_rows
from symsep.pipeline.sweep import SweepResult, SweepRow, ThresholdResult
from symsep.validation.artifacts import validate_summary_json, validate_sweep_csv


def _result(series: str = "theorem1") -> SweepResult:
    rows = (
        SweepRow(0.0, 1.0, 1.5, -0.5),
        SweepRow(0.5, 1.5, 1.5, 0.0),
        SweepRow(1.0, 2.0, 1.5, 0.5),
    )
    solve = ThresholdResult(root=0.5, lower=0.5, upper=1.0, f_lower=0.0, f_upper=0.5)
    return SweepResult(series=series, param="p", rows=rows, solve=solve, config={"a": [0.1, 0.1]})


def test_sweep_export_columns(tmp_path: Path) -> None:
    paths = export_sweeps(tmp_path, "example1", [_result("8x2_theorem1"), _result("8x2_baseline")])

    assert [path.name for path in paths.csv_paths] == ["example1_8x2_theorem1.csv", "example1_8x2_baseline.csv"]
    with paths.csv_paths[0].open("r", encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        assert reader.fieldnames == SWEEP_COLUMNS
        rows = list(reader)
    assert rows[0] == {"param": "p", "value": "0", "trace_norm": "1", "bound": "1.5", "margin": "-0.5"}
    assert validate_sweep_csv(paths.csv_paths[0], expected_rows=3).valid

    summary = json.loads(paths.summary_path.read_text(encoding="utf-8"))
    assert summary["target"] == "example1"
    assert summary["series"][0]["threshold"] == 0.5
    assert summary["series"][0]["entangled_interval"] == [0.5, 1.0]
    assert validate_summary_json(paths.summary_path, expected_series=["8x2_baseline"]).valid


def test_rows_to_stream() -> None:
    buffer = io.StringIO()
    assert write_sweep_rows(buffer, _result(), digits=6) == 3
    lines = buffer.getvalue().splitlines()
    assert lines[0] == "param,value,trace_norm,bound,margin"
    assert lines[-1] == "p,1,2,1.5,0.5"


def test_number_format() -> None:
    assert format_number(0.000393123456789123) == "0.000393123456789"
    assert format_number(2 / 3, 6) == "0.666667"


def test_validation_flags_inconsistent_margin(tmp_path: Path) -> None:
    path = tmp_path / "bad.csv"
    path.write_text("param,value,trace_norm,bound,margin\np,0,1,1.5,0.2\n", encoding="utf-8")
    result = validate_sweep_csv(path)
    assert not result.valid
    assert "margin" in (result.error or "")


def test_validation_flags_row_count_and_summary(tmp_path: Path) -> None:
    path = tmp_path / "short.csv"
    path.write_text("param,value,trace_norm,bound,margin\np,0,1,1.5,-0.5\n", encoding="utf-8")
    assert not validate_sweep_csv(path, expected_rows=2).valid
    assert not validate_sweep_csv(tmp_path / "absent.csv").valid

    summary = tmp_path / "example1_summary.json"
    summary.write_text('{"series": []}', encoding="utf-8")
    assert not validate_summary_json(summary).valid
    summary.write_text('{"series": [{"series": "x", "threshold": null, "config": {}}]}', encoding="utf-8")
    assert validate_summary_json(summary).valid
    assert not validate_summary_json(summary, expected_series=["y"]).valid
