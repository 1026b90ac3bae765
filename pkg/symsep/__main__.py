from __future__ import annotations

import argparse
import json
import logging
import sys
from datetime import datetime, timezone
from pathlib import Path
from secrets import token_hex
from subprocess import DEVNULL, CalledProcessError, check_output
from typing import Callable, Sequence

from symsep import __version__
from symsep.analytics.criteria import CRITERIA, CriterionReport, evaluate, evaluate_baseline_equal_entries
from symsep.config import ConfigError, LoadedConfig, default_config, load_config
from symsep.errors import StateFormatError, SymsepError
from symsep.io.bundle import create_run_bundle
from symsep.io.layout import create_run_layout, write_run_meta
from symsep.io.state_io import load_state
from symsep.io.sweep_export import write_sweep_csv, write_sweep_rows
from symsep.measurement.basis import layout
from symsep.measurement.povm import SymmetricPovm, build, t_range
from symsep.models.state import DensityMatrix
from symsep.obs.logging import Event, LogSettings, build_logger, log_event
from symsep.pipeline.reproduce import (
    EXIT_OK,
    EXIT_VALIDATION_ERROR,
    TARGETS,
    expand_targets,
    run_reproduction,
)
from symsep.pipeline.sweep import make_grid, run_sweep
from symsep.states.factory import noisy_family, white_noise_mix

EXIT_ERROR = 1
EXIT_ENTANGLED = 2
EXIT_CONFIG_ERROR = 3

BUILTIN_PREFIX = "builtin:"


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="Path to config YAML (defaults apply when omitted)")
    parser.add_argument("--log-level", default="INFO", help="Logging level")


def _add_povm_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--povm", required=True, help="POVM shape as N,M")
    parser.add_argument("--t", type=float, required=True, help="Steering parameter t")


def _add_criterion_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--a", default="", help="Comma-separated entries of a (empty for a = 0)")
    parser.add_argument("--b", default="", help="Comma-separated entries of b (empty for b = 0)")
    parser.add_argument(
        "--party",
        type=int,
        default=1,
        help="1-based row party of the split A_q | rest (n-party states or --criterion theorem2)",
    )
    parser.add_argument("--criterion", choices=[*CRITERIA, "theorem2"], default="theorem1")


def parse_args(argv: Sequence[str]) -> argparse.Namespace:
    parser = argparse.ArgumentParser(prog="symsep", description="Trace-norm separability criteria CLI")
    parser.add_argument("--version", action="version", version=f"symsep {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    reproduce_parser = subparsers.add_parser("reproduce", help="Reproduce a worked example")
    reproduce_parser.add_argument("target", choices=[*TARGETS, "all"])
    reproduce_parser.add_argument("--out", default="runs", help="Output directory")
    reproduce_parser.add_argument("--run-id", help="Run id (generated when omitted)")
    _add_common(reproduce_parser)

    sweep_parser = subparsers.add_parser("sweep", help="Sweep a one-parameter state family")
    sweep_parser.add_argument("--state", required=True, help="State JSON file or builtin:<name>")
    sweep_parser.add_argument("--param", required=True, choices=["p", "q", "lambda"])
    sweep_parser.add_argument("--baseline", help="Equal-entry baseline as mu,nu,l")
    sweep_parser.add_argument("--out", help="CSV path (stdout when omitted)")
    _add_povm_flags(sweep_parser)
    _add_criterion_flags(sweep_parser)
    _add_common(sweep_parser)

    evaluate_parser = subparsers.add_parser("evaluate", help="Evaluate one state")
    evaluate_parser.add_argument("--state", required=True, help="State JSON file")
    _add_povm_flags(evaluate_parser)
    _add_criterion_flags(evaluate_parser)
    _add_common(evaluate_parser)

    info_parser = subparsers.add_parser("povm-info", help="Print a POVM as JSON")
    info_parser.add_argument("--d", type=int, required=True, help="Dimension")
    _add_povm_flags(info_parser)
    info_parser.add_argument("--log-level", default="INFO", help="Logging level")

    return parser.parse_args(list(argv))


def generate_run_id() -> str:
    timestamp = datetime.now(timezone.utc).strftime("%Y%m%d_%H%M%SZ")
    suffix = token_hex(3)
    return f"{timestamp}_{suffix}"


def get_git_commit() -> str | None:
    try:
        return check_output(["git", "rev-parse", "HEAD"], text=True, stderr=DEVNULL).strip()
    except (CalledProcessError, FileNotFoundError):
        return None


def parse_vector(value: str) -> tuple[float, ...]:
    text = value.strip()
    if not text:
        return ()
    return tuple(float(item) for item in text.split(","))


def parse_shape(value: str) -> tuple[int, int]:
    parts = [item.strip() for item in value.split(",")]
    if len(parts) != 2:
        raise ValueError(f"--povm expects N,M, got '{value}'")
    return int(parts[0]), int(parts[1])


def parse_baseline(value: str) -> tuple[float, float, int]:
    parts = [item.strip() for item in value.split(",")]
    if len(parts) != 3:
        raise ValueError(f"--baseline expects mu,nu,l, got '{value}'")
    return float(parts[0]), float(parts[1]), int(parts[2])


def _load(args: argparse.Namespace) -> LoadedConfig:
    if getattr(args, "config", None):
        return load_config(Path(args.config))
    return default_config()


def _party_povms(dims: Sequence[int], shape: tuple[int, int], t: float) -> list[SymmetricPovm]:
    """One POVM per subsystem, sharing (N, M) and t; built once per distinct dimension."""
    cache: dict[int, SymmetricPovm] = {}
    for d in dims:
        if d not in cache:
            cache[d] = build(layout(d, *shape), t)
    return [cache[d] for d in dims]


def _evaluate_with(args: argparse.Namespace, rho: DensityMatrix, povms: Sequence[SymmetricPovm]) -> CriterionReport:
    return evaluate(args.criterion, rho, povms, parse_vector(args.a), parse_vector(args.b), q=args.party)


def _run_evaluate(args: argparse.Namespace, logger: logging.Logger) -> int:
    rho = load_state(Path(args.state))
    povms = _party_povms(rho.dims, parse_shape(args.povm), args.t)
    report = _evaluate_with(args, rho, povms)
    print(json.dumps(report.to_payload(), ensure_ascii=False, indent=2))
    log_event(logger, logging.INFO, Event.EVALUATED, "State evaluated", verdict=report.verdict, margin=report.margin)
    return EXIT_ENTANGLED if report.entangled else EXIT_OK


def _sweep_family(args: argparse.Namespace) -> Callable[[float], DensityMatrix]:
    if args.state.startswith(BUILTIN_PREFIX):
        param, make_state = noisy_family(args.state[len(BUILTIN_PREFIX) :])
        if param != args.param:
            raise ValueError(f"Builtin family '{args.state}' is parametrized by '{param}', not '{args.param}'")
        return make_state
    if args.param != "p":
        raise ValueError("A state file is swept by white-noise mixing; use --param p")
    base = load_state(Path(args.state))
    return lambda p: white_noise_mix(base, p)


def _run_sweep(args: argparse.Namespace, loaded: LoadedConfig, logger: logging.Logger) -> int:
    make_state = _sweep_family(args)
    sample = make_state(1.0)
    shape = parse_shape(args.povm)
    povms = _party_povms(sample.dims, shape, args.t)
    sweep_cfg = loaded.config.sweep

    if args.baseline:
        if sample.n_parties != 2:
            raise ValueError("The equal-entry baseline is bipartite only")
        mu, nu, length = parse_baseline(args.baseline)
        series = "baseline"

        def evaluate_at(value: float) -> CriterionReport:
            return evaluate_baseline_equal_entries(make_state(value), povms[0], povms[1], mu, nu, length)

        vectors: dict[str, object] = {"baseline": {"mu": mu, "nu": nu, "l": length}}
    else:
        series = "theorem2" if sample.n_parties > 2 else args.criterion

        def evaluate_at(value: float) -> CriterionReport:
            return _evaluate_with(args, make_state(value), povms)

        vectors = {"a": list(parse_vector(args.a)), "b": list(parse_vector(args.b)), "party": args.party}

    result = run_sweep(
        series,
        args.param,
        evaluate_at,
        grid=make_grid(sweep_cfg.lower, sweep_cfg.upper, sweep_cfg.grid_points),
        xtol=sweep_cfg.xtol,
        workers=sweep_cfg.workers,
        config={"state": args.state, "povm": povms[0].summary(), **vectors},
    )
    log_event(
        logger,
        logging.INFO,
        Event.SWEEP_COMPLETE,
        "Sweep finished",
        series=series,
        threshold=result.threshold,
        evaluations=result.evaluations,
    )
    digits = loaded.config.reproduce.significant_digits
    if args.out:
        write_sweep_csv(Path(args.out), result, digits=digits)
        print(json.dumps(result.to_payload(), ensure_ascii=False, indent=2))
    else:
        write_sweep_rows(sys.stdout, result, digits=digits)
    return EXIT_OK


def _run_povm_info(args: argparse.Namespace) -> int:
    basis_layout = layout(args.d, *parse_shape(args.povm))
    povm = build(basis_layout, args.t)
    interval = t_range(basis_layout)
    payload = povm.to_payload()
    payload["family"] = povm.family
    payload["t_range"] = [interval.lower, interval.upper]
    payload["grouping"] = [list(group) for group in basis_layout.labels]
    print(json.dumps(payload, ensure_ascii=False))
    return EXIT_OK


def _run_reproduce(args: argparse.Namespace, loaded: LoadedConfig, logger: logging.Logger) -> int:
    targets = expand_targets(args.target)
    output_dir = Path(args.out)
    run_name = loaded.config.runtime.run_name
    run_id = args.run_id or (f"{run_name}_{generate_run_id()}" if run_name else generate_run_id())
    started_at = datetime.now(timezone.utc).isoformat().replace("+00:00", "Z")

    try:
        output_dir.mkdir(parents=True, exist_ok=True)
        run_layout = create_run_layout(output_dir, run_id, loaded.config)
    except (PermissionError, FileExistsError) as exc:
        log_event(logger, logging.ERROR, Event.OUTPUT_NOT_WRITABLE, str(exc))
        return EXIT_ERROR

    if run_layout.log_path:
        logger = build_logger(
            LogSettings(level=args.log_level.upper(), run_id=run_id, log_file=run_layout.log_path, jsonl=True)
        )

    config_payload = loaded.config.model_dump(mode="json")
    write_run_meta(
        run_layout.run_meta_path,
        run_id=run_id,
        started_at=started_at,
        git_commit=get_git_commit(),
        config=config_payload,
        status="running",
        symsep_version=__version__,
        target=args.target,
    )
    log_event(logger, logging.INFO, Event.RUN_STARTED, "Run initialized", targets=targets, run_dir=str(run_layout.run_dir))

    exit_code, outcomes = run_reproduction(
        targets,
        run_dir=run_layout.run_dir,
        config=loaded.config,
        logger=logger,
        metrics_path=run_layout.metrics_path,
    )

    write_run_meta(
        run_layout.run_meta_path,
        run_id=run_id,
        started_at=started_at,
        git_commit=get_git_commit(),
        config=config_payload,
        status="success" if exit_code == EXIT_OK else "failed",
        symsep_version=__version__,
        target=args.target,
        error=None if exit_code == EXIT_OK else f"reproduce_exit_{exit_code}",
    )

    if loaded.config.reproduce.bundle and any(outcome.results for outcome in outcomes):
        try:
            create_run_bundle(run_layout.run_dir)
        except FileNotFoundError as exc:
            log_event(logger, logging.ERROR, Event.BUNDLE_FAILED, str(exc), exc_info=exc)
            exit_code = max(exit_code, EXIT_VALIDATION_ERROR)

    summary = {
        "run_dir": str(run_layout.run_dir),
        "exit_code": exit_code,
        "targets": {
            outcome.target: {
                "thresholds": outcome.thresholds(),
                "failures": [list(failure) for failure in outcome.failures],
                "notes": list(outcome.notes),
            }
            for outcome in outcomes
        },
    }
    print(json.dumps(summary, ensure_ascii=False, indent=2))
    log_event(logger, logging.INFO, Event.RUN_COMPLETE, "Run complete", exit_code=exit_code)
    return exit_code


def main(argv: Sequence[str] | None = None) -> int:
    args = parse_args(sys.argv[1:] if argv is None else argv)
    logger = build_logger(
        LogSettings(
            level=args.log_level.upper(),
            run_id=getattr(args, "run_id", None) or "cli",
            log_file=None,
            jsonl=True,
        )
    )

    if args.command == "povm-info":
        try:
            return _run_povm_info(args)
        except (SymsepError, ValueError) as exc:
            log_event(logger, logging.ERROR, Event.POVM_INVALID, str(exc), exc_info=exc)
            return EXIT_ERROR

    try:
        loaded = _load(args)
    except ConfigError as exc:
        log_event(logger, logging.ERROR, Event.CONFIG_INVALID, str(exc))
        return EXIT_CONFIG_ERROR

    try:
        if args.command == "reproduce":
            return _run_reproduce(args, loaded, logger)
        if args.command == "sweep":
            return _run_sweep(args, loaded, logger)
        if args.command == "evaluate":
            return _run_evaluate(args, logger)
    except StateFormatError as exc:
        log_event(logger, logging.ERROR, Event.STATE_INVALID, str(exc), exc_info=exc)
        return EXIT_ERROR
    except (SymsepError, ValueError) as exc:
        log_event(logger, logging.ERROR, Event.COMMAND_FAILED, str(exc), command=args.command, exc_info=exc)
        return EXIT_ERROR
    raise ValueError(f"Unsupported command: {args.command}")


if __name__ == "__main__":
    raise SystemExit(main())
