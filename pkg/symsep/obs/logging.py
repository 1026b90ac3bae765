"""
Structured JSON Lines logging.

Each log entry is one JSON object per line:
- Timestamp (ISO 8601 UTC)
- Log level
- Run ID for correlation
- Event type for filtering
- Module name
- Human-readable message
- Extra structured data

Example log entry:
    {"ts": "2026-01-15T10:30:00Z", "level": "INFO", "run_id": "abc123",
     "event": "threshold_found", "module": "sweep", "msg": "Sign change refined",
     "extra": {"series": "8x2_theorem1", "threshold": 0.882179}}
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Any


class Event(str, Enum):
    """Event names carried in the ``event`` field of every entry."""

    RUN_STARTED = "run_started"
    RUN_COMPLETE = "run_complete"
    CASE_START = "case_start"
    CASE_END = "case_end"
    PROVENANCE_NOTE = "provenance_note"
    POVM_BUILT = "povm_built"
    CRITERION_EVALUATED = "criterion_evaluated"
    BORDER_OPTIMIZED = "border_optimized"
    EVALUATED = "evaluated"
    SWEEP_POINT = "sweep_point"
    SWEEP_COMPLETE = "sweep_complete"
    THRESHOLD_FOUND = "threshold_found"
    THRESHOLD_ABSENT = "threshold_absent"
    EXPORT_FAILED = "export_failed"
    ARTIFACT_INVALID = "artifact_invalid"
    BUNDLE_CREATED = "bundle_created"
    BUNDLE_FAILED = "bundle_failed"
    CONFIG_INVALID = "config_invalid"
    STATE_INVALID = "state_invalid"
    POVM_INVALID = "povm_invalid"
    OUTPUT_NOT_WRITABLE = "output_not_writable"
    COMMAND_FAILED = "command_failed"

@dataclass(frozen=True)
class LogSettings:
    """
    Configuration for logger initialization.

    Attributes:
        level: Log level string (DEBUG, INFO, WARNING, ERROR).
        run_id: Identifier included in every entry.
        log_file: Optional path to a log file (None for console only).
        jsonl: If True, use JSON Lines format; otherwise plain text.
    """
    level: str
    run_id: str
    log_file: Path | None
    jsonl: bool

class JsonLineFormatter(logging.Formatter):
    """Formats each record as a single JSON object."""

    def __init__(self, run_id: str):
        super().__init__()
        self._run_id = run_id

    def format(self, record: logging.LogRecord) -> str:
        event = getattr(record, "event", "log")
        extra = getattr(record, "extra", {})
        if not isinstance(extra, dict):
            extra = {"value": extra}

        payload = {
            "ts": datetime.now(timezone.utc).isoformat().replace("+00:00", "Z"),
            "level": record.levelname,
            "run_id": self._run_id,
            "event": event,
            "module": record.module,
            "msg": record.getMessage(),
            "extra": extra,
        }
        if record.exc_info:
            payload["exc"] = self.formatException(record.exc_info)
        return json.dumps(payload, ensure_ascii=False, default=str)

def build_logger(settings: LogSettings) -> logging.Logger:
    """
    Create an isolated (non-propagating) logger for one CLI invocation.

    Console output goes to stderr so stdout stays free for command results.
    Library modules log under ``symsep.*``; their records are routed to the
    same handlers.
    """
    logger = logging.getLogger(f"symsep.run.{settings.run_id}")
    logger.setLevel(settings.level)
    logger.handlers.clear()
    logger.propagate = False

    formatter = JsonLineFormatter(settings.run_id) if settings.jsonl else None

    stream_handler = logging.StreamHandler()
    if formatter:
        stream_handler.setFormatter(formatter)
    handlers: list[logging.Handler] = [stream_handler]

    if settings.log_file:
        file_handler = logging.FileHandler(settings.log_file, encoding="utf-8")
        if formatter:
            file_handler.setFormatter(formatter)
        handlers.append(file_handler)

    for handler in handlers:
        logger.addHandler(handler)

    library = logging.getLogger("symsep")
    library.setLevel(settings.level)
    library.handlers.clear()
    for handler in handlers:
        library.addHandler(handler)

    return logger

def log_event(
    logger: logging.Logger,
    level: int,
    event: Event,
    message: str,
    *,
    exc_info: logging._ExcInfoType | None = None,
    **extra: Any,
) -> None:
    """
    Log a structured event with typed metadata.

    The record carries the plain event name in ``record.event``.

    Raises:
        ValueError: If ``event`` is not a known Event name.

    Example:
        >>> log_event(logger, logging.INFO, Event.THRESHOLD_FOUND,
        ...           "Sign change refined", series="1x9_gsic", threshold=0.883875)
    """
    name = Event(event).value
    logger.log(level, message, extra={"event": name, "extra": extra}, exc_info=exc_info)
