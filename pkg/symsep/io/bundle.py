from __future__ import annotations

import json
import logging
import zipfile
from pathlib import Path

from symsep.obs.logging import Event, log_event
from symsep.obs.metrics import update_metrics

BUNDLE_SUFFIXES = (".csv", "_summary.json")
BUNDLE_FILES = ("run_meta.json", "metrics.json")


def _iter_result_files(run_dir: Path) -> list[Path]:
    return sorted(
        path for path in run_dir.iterdir() if path.is_file() and path.name.endswith(BUNDLE_SUFFIXES)
    )


def create_run_bundle(run_dir: Path) -> Path:
    """
    Zip sweep CSVs, summaries and run metadata into ``run_bundle.zip``.

    The configuration recorded in run_meta.json is also stored on its own as
    run_config.json.

    Raises:
        FileNotFoundError: If run_meta.json is missing.
    """
    run_meta_path = run_dir / "run_meta.json"
    if not run_meta_path.exists():
        raise FileNotFoundError(f"run_meta.json not found in {run_dir}")

    run_meta = json.loads(run_meta_path.read_text(encoding="utf-8"))
    bundle_path = run_dir / "run_bundle.zip"

    with zipfile.ZipFile(bundle_path, "w", compression=zipfile.ZIP_DEFLATED) as bundle:
        for path in _iter_result_files(run_dir):
            bundle.write(path, arcname=path.name)
        for filename in BUNDLE_FILES:
            path = run_dir / filename
            if path.exists():
                bundle.write(path, arcname=filename)

        config_payload = run_meta.get("config", {})
        bundle.writestr("run_config.json", json.dumps(config_payload, ensure_ascii=False, indent=2))

    update_metrics(run_dir / "metrics.json", increments={"bundle_created_total": 1})

    log_event(
        logging.getLogger(__name__),
        logging.INFO,
        Event.BUNDLE_CREATED,
        "Run bundle created",
        path=str(bundle_path),
    )

    return bundle_path
