import json
import zipfile
from pathlib import Path

import pytest

from symsep.__main__ import (
    EXIT_CONFIG_ERROR,
    EXIT_ENTANGLED,
    EXIT_ERROR,
    EXIT_OK,
    main,
    parse_baseline,
    parse_shape,
    parse_vector,
)
from symsep.io.state_io import dump_state
from symsep.models.state import maximally_mixed
from symsep.states.factory import isotropic

ENTANGLED_ARGS = ["--povm", "8,2", "--t", "0.01", "--a", "0.1,0.1", "--b", "0.05,0.051"]


def _fast_config(tmp_path: Path) -> Path:
    config_path = tmp_path / "config.yaml"
    config_path.write_text(
        """
        sweep:
          grid_points: 41
        reproduce:
          include_reduced: false
        """,
        encoding="utf-8",
    )
    return config_path


def test_argument_parsers() -> None:
    assert parse_vector("0.1, 0.2") == (0.1, 0.2)
    assert parse_vector("") == ()
    assert parse_shape("8,2") == (8, 2)
    assert parse_baseline("0.1,0.05,2") == (0.1, 0.05, 2)
    with pytest.raises(ValueError):
        parse_shape("8")
    with pytest.raises(ValueError):
        parse_baseline("0.1,0.05")


def test_evaluate_exit_codes(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    entangled = dump_state(tmp_path / "iso.json", isotropic(3, 1.0))
    mixed = dump_state(tmp_path / "mixed.json", maximally_mixed((3, 3)))

    assert main(["evaluate", "--state", str(entangled), *ENTANGLED_ARGS]) == EXIT_ENTANGLED
    report = json.loads(capsys.readouterr().out)
    assert report["verdict"] == "entangled-detected"
    assert report["criterion"] == "theorem1"
    assert report["margin"] > 0

    assert main(["evaluate", "--state", str(mixed), *ENTANGLED_ARGS]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["verdict"] == "inconclusive"


def test_evaluate_rejects_malformed_state(tmp_path: Path) -> None:
    path = tmp_path / "broken.json"
    path.write_text('{"dims": [3, 3], "matrix": [[1, 0]]}', encoding="utf-8")
    assert main(["evaluate", "--state", str(path), "--povm", "8,2", "--t", "0.01"]) == EXIT_ERROR


def test_evaluate_rejects_bad_povm_shape(tmp_path: Path) -> None:
    state = dump_state(tmp_path / "iso.json", isotropic(3, 0.5))
    assert main(["evaluate", "--state", str(state), "--povm", "3,3", "--t", "0.01"]) == EXIT_ERROR
    assert main(["evaluate", "--state", str(state), "--povm", "8,2", "--t", "0.9"]) == EXIT_ERROR


def test_party_index_needs_the_split_criterion(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    state = dump_state(tmp_path / "iso.json", isotropic(3, 1.0))
    assert main(["evaluate", "--state", str(state), *ENTANGLED_ARGS, "--party", "2"]) == EXIT_ERROR
    capsys.readouterr()

    code = main(["evaluate", "--state", str(state), *ENTANGLED_ARGS, "--criterion", "theorem2", "--party", "2"])
    assert code in (EXIT_OK, EXIT_ENTANGLED)
    report = json.loads(capsys.readouterr().out)
    assert report["criterion"] == "theorem2"
    assert report["bipartition_q"] == 2


def test_missing_config_is_a_config_error(tmp_path: Path) -> None:
    state = dump_state(tmp_path / "iso.json", isotropic(3, 0.5))
    args = ["evaluate", "--state", str(state), "--povm", "8,2", "--t", "0.01", "--config", str(tmp_path / "nope.yaml")]
    assert main(args) == EXIT_CONFIG_ERROR


def test_povm_info(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["povm-info", "--d", "3", "--povm", "4,3", "--t", "0.1"]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["family"] == "mum"
    assert payload["grouping"][3] == ["D(1)", "D(2)"]
    assert payload["t_range"][0] < 0 < payload["t_range"][1]
    assert len(payload["operators"]) == 12

    assert main(["povm-info", "--d", "3", "--povm", "4,3", "--t", "0.5"]) == EXIT_ERROR


def test_sweep_builtin_family(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    out = tmp_path / "iso.csv"
    code = main(
        [
            "sweep",
            "--state",
            "builtin:isotropic",
            "--param",
            "q",
            *ENTANGLED_ARGS,
            "--out",
            str(out),
            "--config",
            str(_fast_config(tmp_path)),
        ]
    )
    assert code == EXIT_OK
    summary = json.loads(capsys.readouterr().out)
    assert summary["threshold"] == pytest.approx(0.25, abs=1e-3)
    assert out.read_text(encoding="utf-8").splitlines()[0] == "param,value,trace_norm,bound,margin"
    assert len(out.read_text(encoding="utf-8").splitlines()) == 42


def test_sweep_to_stdout_with_baseline(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    code = main(
        [
            "sweep",
            "--state",
            "builtin:isotropic",
            "--param",
            "q",
            "--povm",
            "4,3",
            "--t",
            "0.01",
            "--baseline",
            "0.1,0.05,2",
            "--config",
            str(_fast_config(tmp_path)),
        ]
    )
    assert code == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "param,value,trace_norm,bound,margin"
    assert lines[1].startswith("q,0,")


def test_sweep_rejects_mismatched_parameter(tmp_path: Path) -> None:
    args = ["sweep", "--state", "builtin:rho1", "--param", "p", "--povm", "8,2", "--t", "0.01"]
    assert main(args) == EXIT_ERROR


def test_reproduce_writes_run_directory(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    out_dir = tmp_path / "runs"
    code = main(
        [
            "reproduce",
            "example1",
            "--out",
            str(out_dir),
            "--run-id",
            "smoke",
            "--config",
            str(_fast_config(tmp_path)),
        ]
    )
    assert code == EXIT_OK

    summary = json.loads(capsys.readouterr().out)
    run_dir = out_dir / "run_smoke"
    assert summary["run_dir"] == str(run_dir)
    assert summary["targets"]["example1"]["thresholds"]["8x2_theorem1"] == pytest.approx(0.882179, abs=1e-4)

    run_meta = json.loads((run_dir / "run_meta.json").read_text(encoding="utf-8"))
    assert run_meta["status"] == "success"
    assert run_meta["config"]["sweep"]["grid_points"] == 41
    assert (run_dir / "example1_8x2_theorem1.csv").exists()
    assert (run_dir / "example1_8x2_baseline.csv").exists()
    assert not (run_dir / "example1_8x2_reduced.csv").exists()

    events = [json.loads(line)["event"] for line in (run_dir / "logs.jsonl").read_text(encoding="utf-8").splitlines()]
    assert "run_started" in events
    assert "case_end" in events
    assert "bundle_created" in events

    with zipfile.ZipFile(run_dir / "run_bundle.zip") as bundle:
        assert "example1_summary.json" in bundle.namelist()

    assert main(["reproduce", "example1", "--out", str(out_dir), "--run-id", "smoke"]) == EXIT_ERROR
