import json
import logging
from pathlib import Path

import pytest

from symsep.obs.logging import Event, JsonLineFormatter, LogSettings, build_logger, log_event


def test_formatter_writes_one_json_object_per_record() -> None:
    record = logging.LogRecord("symsep.sweep", logging.INFO, __file__, 1, "Sign change refined", None, None)
    record.event = Event.THRESHOLD_FOUND.value
    record.extra = {"series": "4x3_mum", "threshold": 0.8822}
    payload = json.loads(JsonLineFormatter("abc123").format(record))
    assert payload["event"] == "threshold_found"
    assert payload["run_id"] == "abc123"
    assert payload["level"] == "INFO"
    assert payload["extra"]["series"] == "4x3_mum"
    assert payload["ts"].endswith("Z")


def test_log_event_records_plain_event_name(caplog: pytest.LogCaptureFixture) -> None:
    logger = logging.getLogger("symsep.test.events")
    with caplog.at_level(logging.INFO, logger="symsep.test.events"):
        log_event(logger, logging.INFO, Event.SWEEP_COMPLETE, "Sweep finished", points=41)
        log_event(logger, logging.INFO, "case_end", "Case finished")
    assert [record.event for record in caplog.records] == ["sweep_complete", "case_end"]
    assert caplog.records[0].extra == {"points": 41}


def test_log_event_rejects_unknown_event() -> None:
    with pytest.raises(ValueError):
        log_event(logging.getLogger("symsep.test.events"), logging.INFO, "threshold_guessed", "nope")


def test_build_logger_writes_jsonl_file(tmp_path: Path) -> None:
    log_file = tmp_path / "logs.jsonl"
    logger = build_logger(LogSettings(level="INFO", run_id="r1", log_file=log_file, jsonl=True))
    log_event(logger, logging.INFO, Event.RUN_STARTED, "Run started", command="reproduce")
    for handler in logger.handlers:
        handler.flush()
    entries = [json.loads(line) for line in log_file.read_text(encoding="utf-8").splitlines()]
    assert entries[-1]["event"] == "run_started"
    assert entries[-1]["extra"] == {"command": "reproduce"}
    for handler in logger.handlers + logging.getLogger("symsep").handlers:
        handler.close()
    logging.getLogger("symsep").handlers.clear()
