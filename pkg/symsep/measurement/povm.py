"""
Symmetric informationally complete (N,M)-POVMs.

Given a basis layout {G_{alpha,k}} and a steering parameter t, the
measurement operators are

    E_{alpha,k} = I/M + t H_{alpha,k}
    H_{alpha,k} = G_alpha - sqrt(M)(sqrt(M)+1) G_{alpha,k}    (k < M)
    H_{alpha,M} = (sqrt(M)+1) G_alpha,   G_alpha = sum_k G_{alpha,k}

and satisfy the symmetric trace relations

    tr E = w = d/M,  tr E^2 = x,  tr(E_{alpha,k} E_{alpha,l}) = y = (d - Mx)/(M(M-1)),
    tr(E_{alpha,k} E_{beta,l}) = z = d/M^2   (beta != alpha)

with x = d/M^2 + t^2 (M-1)(sqrt(M)+1)^2. Positivity restricts t to
[-1/(M lambda_max), 1/(M |lambda_min|)] over the spectra of all H.

The dual frame F_{alpha,k} = (E_{alpha,k} - ((N-1)z + y)/(N w) I)/(x - y)
reconstructs a state from its outcome probabilities.

Example:
    >>> povm = build(layout(3, 8, 2), t=0.01)
    >>> povm.x  # 3/4 + 1e-4 (sqrt(2)+1)^2
    0.7505828...
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from symsep.errors import (
    DegenerateFrameError,
    DimensionMismatchError,
    LayoutError,
    ParameterRangeError,
    ProbabilityGridError,
)
from symsep.linalg.kernel import hermitian_eig_extremes
from symsep.measurement.basis import OperatorBasisLayout, family_name
from symsep.models.state import DensityMatrix
from symsep.obs.logging import Event, log_event

PSD_ATOL = 1e-10
RELATION_ATOL = 1e-10
COMPLETENESS_ATOL = 1e-12
# Slack on the closed t-interval for endpoints passed back in from t_range
T_RANGE_SLACK = 1e-12


class TInterval(NamedTuple):
    lower: float
    upper: float

    def contains(self, t: float, slack: float = T_RANGE_SLACK) -> bool:
        return self.lower - slack <= t <= self.upper + slack

    @property
    def midpoint(self) -> float:
        return (self.lower + self.upper) / 2


class GramConstants(NamedTuple):
    w: float
    x: float
    y: float
    z: float


class PartyParameters(NamedTuple):
    """What the separability bounds need from one party's POVM."""
    d: int
    n_outcomes: int
    x: float


@dataclass(frozen=True, eq=False)
class SymmetricPovm:
    """
    N x M grid of measurement operators E_{alpha,k}.

    Attributes:
        layout: Basis layout the operators were built from.
        t: Steering parameter.
        operators: Array of shape (N, M, d, d), read-only.
    """
    layout: OperatorBasisLayout
    t: float
    operators: np.ndarray

    @property
    def d(self) -> int:
        return self.layout.d

    @property
    def n_groups(self) -> int:
        return self.layout.n_groups

    @property
    def n_outcomes(self) -> int:
        return self.layout.n_outcomes

    @property
    def x(self) -> float:
        return x_of_t(self.d, self.n_outcomes, self.t)

    @property
    def constants(self) -> GramConstants:
        return gram_constants(self.d, self.n_outcomes, self.x)

    @property
    def family(self) -> str:
        return family_name(self.d, self.n_groups, self.n_outcomes)

    @property
    def is_projective(self) -> bool:
        return abs(self.x - self.d**2 / self.n_outcomes**2) <= 1e-12

    @property
    def parameters(self) -> PartyParameters:
        return PartyParameters(self.d, self.n_outcomes, self.x)

    def flat_operators(self) -> np.ndarray:
        """Operators as (N*M, d, d) with alpha outer, k inner."""
        return self.operators.reshape(self.n_groups * self.n_outcomes, self.d, self.d)

    def probabilities(self, rho: DensityMatrix | np.ndarray) -> np.ndarray:
        """Outcome probabilities tr(E_{alpha,k} rho) as an (N, M) real grid."""
        matrix = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho)
        if matrix.shape != (self.d, self.d):
            raise DimensionMismatchError(
                f"State of shape {matrix.shape} does not match POVM dimension {self.d}"
            )
        # tr(E rho) = sum_ij E_ij rho_ji
        return np.real(np.einsum("akij,ji->ak", self.operators, matrix))

    def summary(self) -> dict[str, object]:
        return {
            "d": self.d,
            "N": self.n_groups,
            "M": self.n_outcomes,
            "t": self.t,
            "x": self.x,
            "family": self.family,
            "projective": self.is_projective,
            "grouping": [list(group) for group in self.layout.labels],
        }

    def to_payload(self) -> dict[str, object]:
        """JSON export: operators listed alpha outer, k inner, entries row-major [re, im]."""
        payload = {key: value for key, value in self.summary().items() if key in {"d", "N", "M", "t", "x"}}
        payload["operators"] = [
            [[float(value.real), float(value.imag)] for value in op.ravel()] for op in self.flat_operators()
        ]
        return payload


@dataclass(frozen=True, eq=False)
class DualFrame:
    """Reconstruction operators F_{alpha,k}, shape (N, M, d, d)."""
    operators: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.operators.shape[0], self.operators.shape[1]


def x_of_t(d: int, n_outcomes: int, t: float) -> float:
    """Purity parameter x = d/M^2 + t^2 (M-1)(sqrt(M)+1)^2."""
    m = n_outcomes
    return d / m**2 + t**2 * (m - 1) * (math.sqrt(m) + 1) ** 2


def x_interval(d: int, n_outcomes: int) -> tuple[float, float]:
    """(d/M^2, min{d^2/M^2, d/M}); the lower end is open."""
    m = n_outcomes
    return d / m**2, min(d**2 / m**2, d / m)


def gram_constants(d: int, n_outcomes: int, x: float) -> GramConstants:
    m = n_outcomes
    return GramConstants(
        w=d / m,
        x=x,
        y=(d - m * x) / (m * (m - 1)),
        z=d / m**2,
    )


def steering_operators(layout: OperatorBasisLayout) -> np.ndarray:
    """H_{alpha,k} for every group, shape (N, M, d, d)."""
    m = layout.n_outcomes
    root = math.sqrt(m)
    grid = np.zeros((layout.n_groups, m, layout.d, layout.d), dtype=np.complex128)
    for alpha, group in enumerate(layout.groups):
        if len(group) != m - 1:
            raise LayoutError(f"Group {alpha} holds {len(group)} operators, expected {m - 1}")
        total = np.sum(group, axis=0)
        for k, g in enumerate(group):
            grid[alpha, k] = total - root * (root + 1) * g
        grid[alpha, m - 1] = (root + 1) * total
    return grid


def t_range(layout: OperatorBasisLayout) -> TInterval:
    """
    Closed interval of t keeping every E_{alpha,k} positive semidefinite.

    Uses the extreme eigenvalues over all H_{alpha,k}:
    [-1/(M lambda_max), 1/(M |lambda_min|)].
    """
    m = layout.n_outcomes
    lows, highs = [], []
    for h in steering_operators(layout).reshape(-1, layout.d, layout.d):
        low, high = hermitian_eig_extremes(h)
        lows.append(low)
        highs.append(high)
    lambda_min, lambda_max = min(lows), max(highs)
    return TInterval(lower=-1 / (m * lambda_max), upper=1 / (m * abs(lambda_min)))


def trace_relation_errors(povm: SymmetricPovm) -> dict[str, float]:
    """
    Largest deviation of each measured trace constant from its closed form.

    Returns keys w, x, y, z (absolute deviations) and completeness (max
    entry of sum_k E_{alpha,k} - I over all alpha).
    """
    n, m, d = povm.n_groups, povm.n_outcomes, povm.d
    flat = povm.flat_operators()
    traces = np.real(np.einsum("aii->a", flat))
    # tr(E_a E_b) = sum_ij (E_a)_ij (E_b)_ji; operators are Hermitian
    gram = np.real(np.einsum("aij,bji->ab", flat, flat))
    expected = povm.constants

    groups = np.repeat(np.arange(n), m)
    same_group = groups[:, None] == groups[None, :]
    diagonal = np.eye(n * m, dtype=bool)

    def _max_dev(mask: np.ndarray, value: float) -> float:
        if not mask.any():
            return 0.0
        return float(np.max(np.abs(gram[mask] - value)))

    completeness = np.max(np.abs(povm.operators.sum(axis=1) - np.eye(d)))
    return {
        "w": float(np.max(np.abs(traces - expected.w))),
        "x": _max_dev(diagonal, expected.x),
        "y": _max_dev(same_group & ~diagonal, expected.y),
        "z": _max_dev(~same_group, expected.z),
        "completeness": float(completeness),
    }


def build(layout: OperatorBasisLayout, t: float) -> SymmetricPovm:
    """
    Construct the (N,M)-POVM for ``layout`` at steering parameter ``t``.

    Raises:
        LayoutError: If the layout is not informationally complete.
        ParameterRangeError: If t lies outside t_range(layout), or the built
            operators violate positivity, completeness or the trace relations.
    """
    if (layout.n_outcomes - 1) * layout.n_groups != layout.d**2 - 1:
        raise LayoutError(
            f"Layout (N={layout.n_groups}, M={layout.n_outcomes}) is not informationally complete for d={layout.d}"
        )
    interval = t_range(layout)
    if not interval.contains(t):
        raise ParameterRangeError(
            f"t={t} outside admissible interval [{interval.lower:.6g}, {interval.upper:.6g}]"
        )

    m = layout.n_outcomes
    identity = np.eye(layout.d, dtype=np.complex128)
    operators = identity / m + t * steering_operators(layout)
    operators.setflags(write=False)
    povm = SymmetricPovm(layout=layout, t=float(t), operators=operators)

    smallest = min(
        hermitian_eig_extremes(op)[0] for op in povm.flat_operators()
    )
    if smallest < -PSD_ATOL:
        raise ParameterRangeError(f"Measurement operator has negative eigenvalue {smallest:.3e}")
    errors = trace_relation_errors(povm)
    if errors["completeness"] > COMPLETENESS_ATOL:
        raise ParameterRangeError(f"POVM completeness violated by {errors['completeness']:.3e}")
    violated = {key: value for key, value in errors.items() if key != "completeness" and value > RELATION_ATOL}
    if violated:
        raise ParameterRangeError(f"Trace relations violated: {violated}")

    log_event(
        logging.getLogger(__name__),
        logging.DEBUG,
        Event.POVM_BUILT,
        "Symmetric POVM built",
        d=layout.d,
        N=layout.n_groups,
        M=m,
        t=float(t),
        x=povm.x,
        min_eigenvalue=smallest,
    )
    return povm


def coincidence_index(povm: SymmetricPovm, rho: DensityMatrix | np.ndarray) -> float:
    """Sum of squared outcome probabilities over the whole measurement family."""
    return float(np.sum(povm.probabilities(rho) ** 2))


def coincidence_index_closed_form(d: int, n_outcomes: int, x: float, purity: float) -> float:
    m = n_outcomes
    return (d * (m**2 * x - d) * purity + d**3 - m**2 * x) / (d * m * (m - 1))


def coincidence_bound(d: int, n_outcomes: int, x: float) -> float:
    """Upper bound (d-1)/d (d^2 + M^2 x)/(M(M-1)), attained by pure states."""
    m = n_outcomes
    return (d - 1) / d * (d**2 + m**2 * x) / (m * (m - 1))


def dual_frame(povm: SymmetricPovm) -> DualFrame:
    """
    Dual frame of an informationally complete POVM.

    Raises:
        DegenerateFrameError: If x == y (only at t = 0).
    """
    w, x, y, z = povm.constants
    gap = x - y
    if abs(gap) <= 1e-15:
        raise DegenerateFrameError(f"Dual frame undefined at x = y (t={povm.t})")
    n = povm.n_groups
    shift = ((n - 1) * z + y) / (n * w)
    identity = np.eye(povm.d, dtype=np.complex128)
    operators = (povm.operators - shift * identity) / gap
    operators.setflags(write=False)
    return DualFrame(operators=operators)


def reconstruct(frame: DualFrame, probabilities: np.ndarray, *, atol: float = 1e-10) -> DensityMatrix:
    """
    Rebuild the state sum_{alpha,k} p_{alpha,k} F_{alpha,k}.

    Raises:
        ProbabilityGridError: If the grid shape does not match the frame,
            entries fall outside [0, 1] or a row does not sum to 1.
    """
    grid = np.asarray(probabilities, dtype=float)
    if grid.shape != frame.shape:
        raise ProbabilityGridError(f"Probability grid shape {grid.shape} != frame shape {frame.shape}")
    if np.any(grid < -atol) or np.any(grid > 1 + atol):
        raise ProbabilityGridError("Probabilities must lie in [0, 1]")
    row_sums = grid.sum(axis=1)
    if np.any(np.abs(row_sums - 1) > atol):
        raise ProbabilityGridError(f"Each POVM row must sum to 1, got {row_sums.tolist()}")
    matrix = np.einsum("ak,akij->ij", grid, frame.operators)
    d = frame.operators.shape[-1]
    return DensityMatrix(matrix, (d,))
