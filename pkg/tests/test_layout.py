import json
from pathlib import Path

import pytest

from symsep.config import AppConfig, ObsConfig
from symsep.io.layout import config_hash, create_run_layout, write_run_meta


def test_layout_creates_files(tmp_path: Path) -> None:
    config = AppConfig()
    run_id = "20260113_220501Z_ab12cd"

    layout = create_run_layout(tmp_path, run_id, config)

    assert layout.run_dir.exists()
    assert layout.run_dir.name == f"run_{run_id}"
    assert layout.run_meta_path.name == "run_meta.json"
    assert layout.metrics_path.exists()
    assert layout.log_path and layout.log_path.exists()
    metrics = json.loads(layout.metrics_path.read_text(encoding="utf-8"))
    assert metrics["series_total"] == 0
    assert metrics["case_failed_total"] == 0


def test_layout_without_jsonl_log(tmp_path: Path) -> None:
    layout = create_run_layout(tmp_path, "plain", AppConfig(obs=ObsConfig(log_jsonl=False)))
    assert layout.log_path is None
    assert not (layout.run_dir / "logs.jsonl").exists()


def test_layout_refuses_existing_run(tmp_path: Path) -> None:
    create_run_layout(tmp_path, "dup", AppConfig())
    with pytest.raises(FileExistsError):
        create_run_layout(tmp_path, "dup", AppConfig())


def test_run_meta_records_config_hash(tmp_path: Path) -> None:
    path = tmp_path / "run_meta.json"
    config = AppConfig().model_dump()
    write_run_meta(
        path,
        run_id="abc",
        started_at="2026-01-01T00:00:00Z",
        git_commit=None,
        config=config,
        status="success",
        symsep_version="0.1.0",
        target="example1",
    )
    payload = json.loads(path.read_text(encoding="utf-8"))
    assert payload["config_hash"] == config_hash(config)
    assert payload["target"] == "example1"
    assert "error" not in payload
    assert config_hash({"b": 1, "a": 2}) == config_hash({"a": 2, "b": 1})
