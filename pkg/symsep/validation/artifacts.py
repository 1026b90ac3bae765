from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from symsep.io.sweep_export import SWEEP_COLUMNS


@dataclass(frozen=True)
class ValidationResult:
    valid: bool
    error: str | None = None


def _csv_has_columns(path: Path, columns: Iterable[str], *, require_rows: bool) -> ValidationResult:
    if not path.exists():
        return ValidationResult(False, f"Missing file: {path.name}")

    with path.open("r", encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None:
            return ValidationResult(False, f"Missing CSV header: {path.name}")
        missing = [col for col in columns if col not in reader.fieldnames]
        if missing:
            return ValidationResult(False, f"Missing columns in {path.name}: {', '.join(missing)}")
        if require_rows:
            if next(reader, None) is None:
                return ValidationResult(False, f"CSV has no rows: {path.name}")

    return ValidationResult(True, None)


def validate_sweep_csv(path: Path, *, expected_rows: int | None = None, digits: int = 12) -> ValidationResult:
    """Header, row count and numeric cells of one exported series."""
    result = _csv_has_columns(path, SWEEP_COLUMNS, require_rows=True)
    if not result.valid:
        return result

    with path.open("r", encoding="utf-8", newline="") as handle:
        rows = list(csv.DictReader(handle))
    if expected_rows is not None and len(rows) != expected_rows:
        return ValidationResult(False, f"{path.name} has {len(rows)} rows, expected {expected_rows}")
    for index, row in enumerate(rows, start=1):
        try:
            values = [float(row[column]) for column in SWEEP_COLUMNS[1:]]
        except (TypeError, ValueError):
            return ValidationResult(False, f"Non-numeric value in {path.name} row {index}")
        value, trace_norm, bound, margin = values
        if trace_norm < 0 or bound < 0:
            return ValidationResult(False, f"Negative trace norm or bound in {path.name} row {index}")
        if abs((trace_norm - bound) - margin) > 10.0 ** (2 - digits) * max(1.0, bound):
            return ValidationResult(False, f"margin != trace_norm - bound in {path.name} row {index}")
    return ValidationResult(True, None)


def validate_summary_json(path: Path, *, expected_series: Iterable[str] | None = None) -> ValidationResult:
    if not path.exists():
        return ValidationResult(False, f"Missing file: {path.name}")
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        return ValidationResult(False, f"Invalid JSON in {path.name}: {exc}")

    if not isinstance(payload, dict):
        return ValidationResult(False, f"Summary payload must be a dict: {path.name}")
    series = payload.get("series")
    if not isinstance(series, list) or not series:
        return ValidationResult(False, f"Summary series must be a non-empty list: {path.name}")
    for entry in series:
        if not isinstance(entry, dict) or "threshold" not in entry or "config" not in entry:
            return ValidationResult(False, f"Summary series entries need threshold and config: {path.name}")
    if expected_series is not None:
        names = {entry.get("series") for entry in series}
        missing = [name for name in expected_series if name not in names]
        if missing:
            return ValidationResult(False, f"Summary {path.name} lacks series: {', '.join(missing)}")

    return ValidationResult(True, None)
