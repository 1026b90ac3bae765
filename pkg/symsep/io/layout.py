from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

from symsep.config import AppConfig


@dataclass(frozen=True)
class RunLayout:
    run_dir: Path
    log_path: Path | None
    run_meta_path: Path
    metrics_path: Path


def _initial_metrics() -> dict[str, Any]:
    return {
        "series_total": 0,
        "evaluations_total": 0,
        "thresholds_found_total": 0,
        "case_failed_total": 0,
        "created_at": datetime.now(timezone.utc).isoformat().replace("+00:00", "Z"),
    }


def create_run_layout(output_dir: Path, run_id: str, config: AppConfig) -> RunLayout:
    """
    Create ``output_dir/run_<run_id>`` with an empty log file and fresh metrics.

    Raises:
        FileExistsError: If the run directory already exists.
    """
    run_dir = output_dir / f"run_{run_id}"
    run_dir.mkdir(parents=True, exist_ok=False)

    log_path = run_dir / "logs.jsonl" if config.obs.log_jsonl else None
    if log_path:
        log_path.touch(exist_ok=False)

    metrics_path = run_dir / "metrics.json"
    metrics_path.write_text(json.dumps(_initial_metrics(), ensure_ascii=False, indent=2), encoding="utf-8")

    return RunLayout(
        run_dir=run_dir,
        log_path=log_path,
        run_meta_path=run_dir / "run_meta.json",
        metrics_path=metrics_path,
    )


def config_hash(config: dict[str, Any]) -> str:
    normalized = json.dumps(config, ensure_ascii=False, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(normalized.encode("utf-8")).hexdigest()


def write_run_meta(
    path: Path,
    *,
    run_id: str,
    started_at: str,
    git_commit: str | None,
    config: dict[str, Any] | None,
    status: str,
    symsep_version: str,
    target: str,
    error: str | None = None,
) -> None:
    config_payload = config or {}
    payload: dict[str, Any] = {
        "run_id": run_id,
        "started_at": started_at,
        "git_commit": git_commit,
        "config": config_payload,
        "config_hash": config_hash(config_payload) if config is not None else None,
        "status": status,
        "symsep_version": symsep_version,
        "target": target,
    }
    if error:
        payload["error"] = error

    path.write_text(json.dumps(payload, ensure_ascii=False, indent=2), encoding="utf-8")
