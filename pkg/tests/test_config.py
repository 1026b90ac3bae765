import logging
from pathlib import Path

import pytest

from symsep.config import ConfigError, default_config, load_config


def test_valid_config(tmp_path: Path) -> None:
    config_path = tmp_path / "config.yaml"
    config_path.write_text(
        """
        runtime:
          run_name: test
        obs:
          log_jsonl: true
        sweep:
          grid_points: 101
          workers: 2
        reproduce:
          t: 0.02
          include_reduced: false
        """,
        encoding="utf-8",
    )

    loaded = load_config(config_path)
    assert loaded.config.runtime.run_name == "test"
    assert loaded.config.obs.log_jsonl is True
    assert loaded.config.sweep.grid_points == 101
    assert loaded.config.sweep.workers == 2
    assert loaded.config.reproduce.t == 0.02
    assert loaded.config.reproduce.include_reduced is False
    assert loaded.raw["sweep"]["grid_points"] == 101


def test_defaults() -> None:
    config = default_config().config
    assert config.sweep.grid_points == 201
    assert config.sweep.xtol == 1e-9
    assert config.reproduce.t == 0.01
    assert config.reproduce.significant_digits == 12
    assert config.reproduce.bundle is True


def test_empty_file_uses_defaults(tmp_path: Path) -> None:
    config_path = tmp_path / "config.yaml"
    config_path.write_text("", encoding="utf-8")
    assert load_config(config_path).config.sweep.upper == 1.0


def test_invalid_config(tmp_path: Path) -> None:
    config_path = tmp_path / "config.yaml"
    config_path.write_text(
        """
        sweep:
          grid_points: many
        """,
        encoding="utf-8",
    )

    with pytest.raises(ConfigError):
        load_config(config_path)


def test_unknown_key_is_rejected(tmp_path: Path) -> None:
    config_path = tmp_path / "config.yaml"
    config_path.write_text(
        """
        reproduce:
          temperature: 3
        """,
        encoding="utf-8",
    )

    with pytest.raises(ConfigError):
        load_config(config_path)


def test_inverted_sweep_bounds(tmp_path: Path) -> None:
    config_path = tmp_path / "config.yaml"
    config_path.write_text(
        """
        sweep:
          lower: 0.8
          upper: 0.2
        """,
        encoding="utf-8",
    )

    with pytest.raises(ConfigError, match="must be below"):
        load_config(config_path)


def test_missing_and_malformed_files(tmp_path: Path) -> None:
    with pytest.raises(ConfigError, match="not found"):
        load_config(tmp_path / "absent.yaml")

    config_path = tmp_path / "config.yaml"
    config_path.write_text("- just\n- a list\n", encoding="utf-8")
    with pytest.raises(ConfigError, match="mapping"):
        load_config(config_path)

    config_path.write_text("sweep: [unclosed\n", encoding="utf-8")
    with pytest.raises(ConfigError, match="Invalid YAML"):
        load_config(config_path)


def test_coarse_grid_warning(tmp_path: Path, caplog: pytest.LogCaptureFixture) -> None:
    config_path = tmp_path / "config.yaml"
    config_path.write_text(
        """
        sweep:
          grid_points: 11
        """,
        encoding="utf-8",
    )

    with caplog.at_level(logging.WARNING):
        load_config(config_path)

    assert "sweep.grid_points=11 is coarse" in caplog.text
