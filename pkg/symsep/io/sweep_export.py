"""
CSV/JSON export of sweep results.

Key Exports:
    - <target>_<series>.csv: one row per grid point with columns
      param,value,trace_norm,bound,margin (12 significant digits by default)
    - <target>_summary.json: thresholds, root-finder metadata and the full
      configuration of every series

Outputs contain no timestamps, so repeated runs are byte-identical.

Example:
    >>> paths = export_sweeps(run_dir, "example1", results)
    >>> [p.name for p in paths.csv_paths]
    ['example1_theorem1.csv', 'example1_baseline.csv', 'example1_reduced.csv']
"""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, TextIO

from symsep.obs.logging import Event, log_event
from symsep.pipeline.sweep import SweepResult

SWEEP_COLUMNS = ["param", "value", "trace_norm", "bound", "margin"]
DEFAULT_SIGNIFICANT_DIGITS = 12


@dataclass(frozen=True)
class SweepExportPaths:
    csv_paths: tuple[Path, ...]
    summary_path: Path


def format_number(value: float, digits: int = DEFAULT_SIGNIFICANT_DIGITS) -> str:
    return f"{value:.{digits}g}"


def write_sweep_rows(handle: TextIO, result: SweepResult, *, digits: int = DEFAULT_SIGNIFICANT_DIGITS) -> int:
    """Write header and rows to an open text handle; returns the row count."""
    writer = csv.writer(handle, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for row in result.rows:
        writer.writerow(
            [
                result.param,
                format_number(row.value, digits),
                format_number(row.trace_norm, digits),
                format_number(row.bound, digits),
                format_number(row.margin, digits),
            ]
        )
    return len(result.rows)


def write_sweep_csv(path: Path, result: SweepResult, *, digits: int = DEFAULT_SIGNIFICANT_DIGITS) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as handle:
        write_sweep_rows(handle, result, digits=digits)
    return path


def summary_payload(target: str, results: Iterable[SweepResult], extra: dict[str, Any] | None = None) -> dict[str, Any]:
    payload: dict[str, Any] = {"target": target, "series": [result.to_payload() for result in results]}
    if extra:
        payload.update(extra)
    return payload


def export_sweeps(
    output_dir: Path,
    target: str,
    results: Iterable[SweepResult],
    *,
    digits: int = DEFAULT_SIGNIFICANT_DIGITS,
    extra: dict[str, Any] | None = None,
    logger: logging.Logger | None = None,
) -> SweepExportPaths:
    output_dir.mkdir(parents=True, exist_ok=True)
    log = logger or logging.getLogger(__name__)
    results_list = list(results)

    csv_paths: list[Path] = []
    current: str | None = None
    try:
        for result in results_list:
            current = result.series
            csv_paths.append(write_sweep_csv(output_dir / f"{target}_{result.series}.csv", result, digits=digits))
    except Exception as exc:  # noqa: BLE001
        log_event(
            log,
            logging.ERROR,
            Event.EXPORT_FAILED,
            "Sweep CSV export failed",
            target=target,
            series=current,
            exc_info=exc,
        )
        raise

    summary_path = output_dir / f"{target}_summary.json"
    try:
        payload = summary_payload(target, results_list, extra)
        summary_path.write_text(json.dumps(payload, ensure_ascii=False, indent=2) + "\n", encoding="utf-8")
    except Exception as exc:  # noqa: BLE001
        log_event(
            log,
            logging.ERROR,
            Event.EXPORT_FAILED,
            "Sweep summary export failed",
            file=summary_path.name,
            exc_info=exc,
        )
        raise

    return SweepExportPaths(csv_paths=tuple(csv_paths), summary_path=summary_path)
