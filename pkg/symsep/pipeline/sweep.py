"""
One-parameter sweeps of a criterion margin with threshold refinement.

A sweep evaluates a margin function on a uniform grid, locates the first
grid interval where the verdict flips (margin > 0 on one side only) and
refines that sign change with bisection. Grid points are independent, so
they may be evaluated on a thread pool; rows are always returned in grid
order.

Example:
    >>> result = run_sweep("theorem1", "p", evaluate_at, grid=make_grid(0.0, 1.0, 201))
    >>> result.threshold
    0.8821...
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np
from scipy.optimize import bisect

from symsep.analytics.criteria import CriterionReport
from symsep.errors import BracketError
from symsep.obs.logging import Event, log_event

DEFAULT_XTOL = 1e-9
DEFAULT_MAXITER = 200


@dataclass(frozen=True)
class ThresholdResult:
    """
    Root-finder outcome on one bracket.

    Attributes:
        root: Refined root, or None when the endpoint margins share a sign.
        lower: Bracket start.
        upper: Bracket end.
        f_lower: Margin at ``lower``.
        f_upper: Margin at ``upper``.
        iterations: Bisection iterations (0 when no refinement ran).
        converged: False only if bisection stopped at maxiter.
    """
    root: float | None
    lower: float
    upper: float
    f_lower: float
    f_upper: float
    iterations: int = 0
    converged: bool = True

    @property
    def found(self) -> bool:
        return self.root is not None

    def to_payload(self) -> dict[str, Any]:
        return {
            "root": self.root,
            "bracket": [self.lower, self.upper],
            "f_bracket": [self.f_lower, self.f_upper],
            "iterations": self.iterations,
            "converged": self.converged,
        }


@dataclass(frozen=True)
class SweepRow:
    value: float
    trace_norm: float
    bound: float
    margin: float

    @property
    def entangled(self) -> bool:
        return self.margin > 0


@dataclass(frozen=True)
class SweepResult:
    """
    Margins of one series on a grid plus the refined first sign change.

    Attributes:
        series: Series name, e.g. "theorem1" or "baseline".
        param: Swept parameter name (p, q or lambda).
        rows: Grid rows in ascending parameter order.
        solve: Threshold refinement, None when the verdict never flips.
        config: Self-describing echo of everything the series depends on.
    """
    series: str
    param: str
    rows: tuple[SweepRow, ...]
    solve: ThresholdResult | None
    config: dict[str, Any] = field(default_factory=dict)

    @property
    def threshold(self) -> float | None:
        return self.solve.root if self.solve else None

    @property
    def evaluations(self) -> int:
        iterations = self.solve.iterations if self.solve else 0
        return len(self.rows) + iterations

    def entangled_interval(self) -> tuple[float, float] | None:
        """Parameter interval on the entangled side of the threshold."""
        if self.threshold is None:
            return None
        first, last = self.rows[0], self.rows[-1]
        if first.entangled and not last.entangled:
            return first.value, self.threshold
        return self.threshold, last.value

    def to_payload(self) -> dict[str, Any]:
        interval = self.entangled_interval()
        return {
            "series": self.series,
            "param": self.param,
            "grid_points": len(self.rows),
            "threshold": self.threshold,
            "entangled_interval": list(interval) if interval else None,
            "root_finder": self.solve.to_payload() if self.solve else None,
            "config": self.config,
        }


def make_grid(lower: float, upper: float, points: int) -> np.ndarray:
    if points < 2:
        raise BracketError(f"A grid needs at least 2 points, got {points}")
    if lower >= upper:
        raise BracketError(f"Grid bounds must satisfy lower < upper, got [{lower}, {upper}]")
    return np.linspace(lower, upper, points)


def threshold_solve(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    *,
    xtol: float = DEFAULT_XTOL,
    maxiter: int = DEFAULT_MAXITER,
) -> ThresholdResult:
    """
    Bisection root of ``f`` on [lo, hi] when the endpoint signs differ.

    Returns a result with ``root=None`` (and both endpoint margins) when
    they do not. A zero endpoint is returned as the root directly.

    Raises:
        BracketError: If lo >= hi.
    """
    if not lo < hi:
        raise BracketError(f"Invalid bracket: lo={lo} must be below hi={hi}")
    f_lo, f_hi = float(f(lo)), float(f(hi))
    if f_lo == 0.0:
        return ThresholdResult(lo, lo, hi, f_lo, f_hi)
    if f_hi == 0.0:
        return ThresholdResult(hi, lo, hi, f_lo, f_hi)
    if np.sign(f_lo) == np.sign(f_hi):
        return ThresholdResult(None, lo, hi, f_lo, f_hi)
    root, info = bisect(f, lo, hi, xtol=xtol, maxiter=maxiter, full_output=True, disp=False)
    return ThresholdResult(
        root=float(root),
        lower=lo,
        upper=hi,
        f_lower=f_lo,
        f_upper=f_hi,
        iterations=int(info.iterations),
        converged=bool(info.converged),
    )


def _evaluate_grid(
    evaluate_at: Callable[[float], CriterionReport],
    grid: Sequence[float],
    workers: int,
) -> list[CriterionReport]:
    if workers <= 1:
        return [evaluate_at(float(value)) for value in grid]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        # map yields in submission order
        return list(pool.map(lambda value: evaluate_at(float(value)), grid))


def first_sign_change(rows: Sequence[SweepRow]) -> int | None:
    """Index i of the first pair (rows[i], rows[i+1]) whose verdicts differ."""
    for index in range(len(rows) - 1):
        if rows[index].entangled != rows[index + 1].entangled:
            return index
    return None


def run_sweep(
    series: str,
    param: str,
    evaluate_at: Callable[[float], CriterionReport],
    *,
    grid: Sequence[float],
    xtol: float = DEFAULT_XTOL,
    workers: int = 1,
    config: dict[str, Any] | None = None,
) -> SweepResult:
    """
    Evaluate ``evaluate_at`` on ``grid`` and refine the first verdict flip.

    Args:
        series: Name recorded in logs and exports.
        param: Parameter name written to the CSV ``param`` column.
        evaluate_at: Builds the state at a parameter value and evaluates it.
        grid: Ascending parameter values.
        xtol: Bisection tolerance on the parameter.
        workers: Thread pool size for grid evaluation (1 = sequential).
        config: Configuration echo stored on the result.
    """
    logger = logging.getLogger(__name__)
    reports = _evaluate_grid(evaluate_at, grid, workers)
    rows = tuple(
        SweepRow(value=float(value), trace_norm=r.trace_norm, bound=r.bound, margin=r.margin)
        for value, r in zip(grid, reports)
    )
    for row in rows:
        log_event(
            logger,
            logging.DEBUG,
            Event.SWEEP_POINT,
            "Grid point evaluated",
            series=series,
            value=row.value,
            margin=row.margin,
        )

    index = first_sign_change(rows)
    solve: ThresholdResult | None = None
    if index is None:
        log_event(
            logger,
            logging.INFO,
            Event.THRESHOLD_ABSENT,
            "Verdict constant on grid",
            series=series,
            entangled=rows[0].entangled if rows else None,
            margin_first=rows[0].margin if rows else None,
            margin_last=rows[-1].margin if rows else None,
        )
    else:
        solve = threshold_solve(
            lambda value: evaluate_at(value).margin,
            rows[index].value,
            rows[index + 1].value,
            xtol=xtol,
        )
        log_event(
            logger,
            logging.INFO,
            Event.THRESHOLD_FOUND,
            "Sign change refined",
            series=series,
            param=param,
            threshold=solve.root,
            iterations=solve.iterations,
        )

    return SweepResult(series=series, param=param, rows=rows, solve=solve, config=dict(config or {}))
