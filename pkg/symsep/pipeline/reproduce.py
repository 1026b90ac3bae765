"""
Pinned reproduction runs for the worked examples.

Each target is a list of cases; a case fixes a one-parameter state family,
a POVM family on both qutrits (with its exact basis grouping), the free
vectors a, b and the equal-entry baseline. Every case yields three series
swept on the configured grid:

    <family>_<criterion>   enhanced criterion with the pinned a, b
    <family>_baseline      equal-entry a = mu(1,..,1), b = nu(1,..,1)
    <family>_reduced       a = b = 0 (skipped when reproduce.include_reduced is false)

Exit Codes:
    - EXIT_OK (0): all cases ran and outputs validated
    - EXIT_CASE_ERROR (4): at least one case raised
    - EXIT_VALIDATION_ERROR (5): exported artifacts failed validation

Example:
    >>> result = reproduce_target("example2", AppConfig())
    >>> [round(r.threshold, 3) for r in result.results if r.series.endswith("theorem1")]
    [0.25]
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Sequence

from symsep.analytics.criteria import CriterionReport, evaluate, evaluate_baseline_equal_entries
from symsep.config import AppConfig
from symsep.errors import SymsepError
from symsep.io.sweep_export import export_sweeps
from symsep.measurement.basis import layout_from_labels
from symsep.measurement.povm import SymmetricPovm, build
from symsep.obs.logging import Event, log_event
from symsep.obs.metrics import record_case_elapsed, record_series
from symsep.pipeline.sweep import SweepResult, make_grid, run_sweep
from symsep.states.factory import TILES_PROVENANCE, noisy_family
from symsep.validation.artifacts import validate_summary_json, validate_sweep_csv

EXIT_OK = 0
EXIT_CASE_ERROR = 4
EXIT_VALIDATION_ERROR = 5

TARGETS = ("example1", "example2", "example3", "appendixA")


@dataclass(frozen=True)
class FamilySpec:
    """
    POVM family used on both parties of a qutrit pair.

    Attributes:
        key: Short tag used in series names, e.g. "8x2".
        criterion: Criterion evaluated for the enhanced and reduced series.
        grouping: Gell-Mann labels per group, exactly as listed for the example.
    """
    key: str
    criterion: str
    grouping: tuple[tuple[str, ...], ...]


BINARY_8X2 = FamilySpec(
    key="8x2",
    criterion="theorem1",
    grouping=(
        ("X(0,1)",), ("Y(0,1)",), ("X(0,2)",), ("Y(0,2)",),
        ("X(1,2)",), ("Y(1,2)",), ("D(1)",), ("D(2)",),
    ),
)
GSIC_1X9 = FamilySpec(
    key="1x9",
    criterion="gsic",
    grouping=(("D(1)", "X(0,1)", "X(0,2)", "Y(0,1)", "D(2)", "X(1,2)", "Y(0,2)", "Y(1,2)"),),
)
MUM_4X3 = FamilySpec(
    key="4x3",
    criterion="mum",
    grouping=(("X(0,1)", "Y(0,1)"), ("X(0,2)", "Y(0,2)"), ("X(1,2)", "Y(1,2)"), ("D(1)", "D(2)")),
)
FAMILIES = {spec.key: spec for spec in (BINARY_8X2, GSIC_1X9, MUM_4X3)}

ENHANCED_A = (0.1, 0.1)
ENHANCED_B = (0.05, 0.051)
BASELINE = (0.1, 0.05, 2)
RANK5_A = (0.005, 0.005)
RANK5_B = (0.005, 0.0051)
RANK5_BASELINE = (0.005, 0.005, 2)


@dataclass(frozen=True)
class ReproductionCase:
    target: str
    state_family: str
    family: FamilySpec
    a: tuple[float, ...]
    b: tuple[float, ...]
    baseline: tuple[float, float, int]

    @property
    def name(self) -> str:
        return f"{self.target}_{self.family.key}"


def _cases(
    target: str,
    state: str,
    family_keys: Sequence[str],
    a: Sequence[float],
    b: Sequence[float],
    baseline: tuple[float, float, int],
) -> list[ReproductionCase]:
    return [ReproductionCase(target, state, FAMILIES[key], tuple(a), tuple(b), baseline) for key in family_keys]


def target_cases(target: str) -> list[ReproductionCase]:
    if target == "example1":
        return _cases(target, "tiles", ["8x2"], ENHANCED_A, ENHANCED_B, BASELINE)
    if target == "appendixA":
        return _cases(target, "tiles", ["1x9", "4x3"], ENHANCED_A, ENHANCED_B, BASELINE)
    if target == "example2":
        return _cases(target, "isotropic", ["8x2", "1x9", "4x3"], ENHANCED_A, ENHANCED_B, BASELINE)
    if target == "example3":
        return _cases(target, "rho1", ["8x2", "1x9", "4x3"], RANK5_A, RANK5_B, RANK5_BASELINE)
    raise ValueError(f"Unknown reproduce target '{target}'; choose from {list(TARGETS)} or 'all'")


def expand_targets(target: str) -> list[str]:
    if target == "all":
        return list(TARGETS)
    target_cases(target)
    return [target]


@dataclass(frozen=True)
class TargetResult:
    target: str
    results: tuple[SweepResult, ...]
    failures: tuple[tuple[str, str], ...] = ()
    notes: tuple[str, ...] = field(default=())

    def thresholds(self) -> dict[str, float | None]:
        return {result.series: result.threshold for result in self.results}

    def series(self, name: str) -> SweepResult:
        for result in self.results:
            if result.series == name:
                return result
        raise KeyError(name)


def _series_config(
    case: ReproductionCase,
    povm: SymmetricPovm,
    criterion: str,
    config: AppConfig,
    **vectors: Any,
) -> dict[str, Any]:
    return {
        "case": case.name,
        "state": case.state_family,
        "criterion": criterion,
        "povm": povm.summary(),
        **vectors,
        "grid": {"lower": config.sweep.lower, "upper": config.sweep.upper, "points": config.sweep.grid_points},
        "xtol": config.sweep.xtol,
    }


def run_case(case: ReproductionCase, config: AppConfig) -> list[SweepResult]:
    """Sweep the enhanced, baseline and (optionally) reduced series of one case."""
    povm = build(layout_from_labels(3, case.family.grouping), config.reproduce.t)
    param, make_state = noisy_family(case.state_family)
    criterion = case.family.criterion
    mu, nu, length = case.baseline
    grid = make_grid(config.sweep.lower, config.sweep.upper, config.sweep.grid_points)

    def _enhanced(value: float) -> CriterionReport:
        return evaluate(criterion, make_state(value), [povm, povm], case.a, case.b)

    def _baseline(value: float) -> CriterionReport:
        return evaluate_baseline_equal_entries(make_state(value), povm, povm, mu, nu, length)

    def _reduced(value: float) -> CriterionReport:
        return evaluate(criterion, make_state(value), [povm, povm])

    plan: list[tuple[str, Callable[[float], CriterionReport], dict[str, Any]]] = [
        (
            f"{case.family.key}_{criterion}",
            _enhanced,
            _series_config(case, povm, criterion, config, a=list(case.a), b=list(case.b)),
        ),
        (
            f"{case.family.key}_baseline",
            _baseline,
            _series_config(case, povm, "baseline", config, baseline={"mu": mu, "nu": nu, "l": length}),
        ),
    ]
    if config.reproduce.include_reduced:
        plan.append(
            (
                f"{case.family.key}_reduced",
                _reduced,
                _series_config(case, povm, criterion, config, a=[], b=[]),
            )
        )

    return [
        run_sweep(
            series,
            param,
            evaluate_at,
            grid=grid,
            xtol=config.sweep.xtol,
            workers=config.sweep.workers,
            config=series_config,
        )
        for series, evaluate_at, series_config in plan
    ]


def reproduce_target(
    target: str,
    config: AppConfig,
    *,
    logger: logging.Logger | None = None,
    metrics_path: Path | None = None,
) -> TargetResult:
    """
    Run every case of ``target``; a failing case is logged and recorded, not raised.
    """
    log = logger or logging.getLogger(__name__)
    notes: list[str] = []
    if any(case.state_family == "tiles" for case in target_cases(target)):
        notes.append(TILES_PROVENANCE)
        log_event(log, logging.INFO, Event.PROVENANCE_NOTE, TILES_PROVENANCE, target=target)

    results: list[SweepResult] = []
    failures: list[tuple[str, str]] = []
    for case in target_cases(target):
        log_event(
            log,
            logging.INFO,
            Event.CASE_START,
            "Case started",
            case=case.name,
            state=case.state_family,
            family=case.family.key,
        )
        start = time.monotonic()
        try:
            case_results = run_case(case, config)
        except SymsepError as exc:
            elapsed = time.monotonic() - start
            failures.append((case.name, str(exc)))
            if metrics_path:
                record_case_elapsed(metrics_path, case.name, elapsed, failed=True)
            log_event(
                log,
                logging.ERROR,
                Event.CASE_END,
                "Case failed",
                case=case.name,
                status="failed",
                elapsed_s=round(elapsed, 3),
                exc_info=exc,
            )
            continue

        elapsed = time.monotonic() - start
        results.extend(case_results)
        if metrics_path:
            for result in case_results:
                record_series(metrics_path, evaluations=result.evaluations, threshold_found=result.threshold is not None)
            record_case_elapsed(metrics_path, case.name, elapsed, failed=False)
        log_event(
            log,
            logging.INFO,
            Event.CASE_END,
            "Case finished",
            case=case.name,
            status="success",
            elapsed_s=round(elapsed, 3),
            thresholds={result.series: result.threshold for result in case_results},
        )

    return TargetResult(target=target, results=tuple(results), failures=tuple(failures), notes=tuple(notes))


def _validate_outputs(result: TargetResult, run_dir: Path, config: AppConfig) -> list[str]:
    errors: list[str] = []
    for series in result.results:
        check = validate_sweep_csv(
            run_dir / f"{result.target}_{series.series}.csv",
            expected_rows=config.sweep.grid_points,
            digits=config.reproduce.significant_digits,
        )
        if not check.valid:
            errors.append(check.error or "invalid csv")
    check = validate_summary_json(
        run_dir / f"{result.target}_summary.json",
        expected_series=[series.series for series in result.results],
    )
    if not check.valid:
        errors.append(check.error or "invalid summary")
    return errors


def run_reproduction(
    targets: Sequence[str],
    *,
    run_dir: Path,
    config: AppConfig,
    logger: logging.Logger,
    metrics_path: Path,
) -> tuple[int, list[TargetResult]]:
    """
    Reproduce, export and validate each target into ``run_dir``.

    Returns:
        (exit code, per-target results). Validation failures take precedence
        over case failures.
    """
    exit_code = EXIT_OK
    outcomes: list[TargetResult] = []
    for target in targets:
        result = reproduce_target(target, config, logger=logger, metrics_path=metrics_path)
        outcomes.append(result)
        if result.failures:
            exit_code = max(exit_code, EXIT_CASE_ERROR)
        if not result.results:
            continue

        export_sweeps(
            run_dir,
            target,
            result.results,
            digits=config.reproduce.significant_digits,
            extra={"notes": list(result.notes), "failures": [list(f) for f in result.failures]},
            logger=logger,
        )
        errors = _validate_outputs(result, run_dir, config)
        if errors:
            log_event(logger, logging.ERROR, Event.ARTIFACT_INVALID, "Exported artifacts failed validation", target=target, errors=errors)
            exit_code = EXIT_VALIDATION_ERROR

    return exit_code, outcomes
