"""
Trace-norm separability criteria built on symmetric POVMs.

For a bipartite state the augmented matrix

    Q_{a,b} = [[a b^T,   a sigma^T],
               [tau b^T, P        ]]

borders the correlation matrix P with the local marginal vectors tau
(party A) and sigma (party B) and two free real vectors a, b. For every
separable state

    ||Q_{a,b}||_tr <= sqrt(|a|^2 + C_A) sqrt(|b|^2 + C_B)

where C = (d-1)(d^2 + M^2 x)/(d M (M-1)) is the largest coincidence index
the party's POVM can show. A positive margin (trace norm minus bound)
therefore certifies entanglement; a non-positive margin says nothing.

Specializations:
    - GSIC (N=1, M=d^2): C = (x d^2 + 1)/(d(d+1))
    - MUM (N=d+1, M=d):  C = 1 + x
    - baseline: a and b restricted to equal-entry vectors of one length l
    - multipartite: party q against the rest, with the column factor the
      product of the remaining parties' C; detection means "not fully
      separable", nothing stronger.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Any, Sequence

import numpy as np
from scipy.optimize import minimize

from symsep.analytics.correlation import (
    CorrelationMatrix,
    joint_marginal_vector,
    marginal_vector,
    probability_matrix_bipartition,
)
from symsep.errors import DimensionMismatchError, ParameterRangeError, PovmShapeError
from symsep.linalg.kernel import trace_norm
from symsep.measurement.povm import PartyParameters, SymmetricPovm, coincidence_bound
from symsep.models.state import DensityMatrix
from symsep.obs.logging import Event, log_event

CRITERIA = ("theorem1", "gsic", "mum")

VERDICT_ENTANGLED = "entangled-detected"
VERDICT_INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True, eq=False)
class AugmentedMatrix:
    """
    Q_{a,b} together with its ingredients.

    Attributes:
        a: Free row vector (length m, may be empty).
        b: Free column vector (length n, may be empty).
        p: Correlation matrix entries.
        tau: Row-party marginal vector (length = rows of p).
        sigma: Column marginal vector (length = columns of p).
    """
    a: np.ndarray
    b: np.ndarray
    p: np.ndarray
    tau: np.ndarray
    sigma: np.ndarray

    @property
    def matrix(self) -> np.ndarray:
        m, n = self.a.size, self.b.size
        rows, cols = self.p.shape
        q = np.zeros((m + rows, n + cols), dtype=float)
        q[:m, :n] = np.outer(self.a, self.b)
        q[:m, n:] = np.outer(self.a, self.sigma)
        q[m:, :n] = np.outer(self.tau, self.b)
        q[m:, n:] = self.p
        return q

    @property
    def shape(self) -> tuple[int, int]:
        return self.a.size + self.p.shape[0], self.b.size + self.p.shape[1]

    def trace_norm(self) -> float:
        return trace_norm(self.matrix)


@dataclass(frozen=True)
class CriterionReport:
    """
    Outcome of one criterion evaluation.

    ``entangled`` is True iff margin > 0 (strict, no tolerance); the raw
    margin is kept so callers can apply their own.
    """
    criterion: str
    povms: tuple[dict[str, Any], ...]
    a: tuple[float, ...]
    b: tuple[float, ...]
    trace_norm: float
    bound: float
    margin: float
    entangled: bool
    bipartition_q: int | None = None
    state_label: str | None = None
    note: str | None = field(default=None)

    @property
    def verdict(self) -> str:
        return VERDICT_ENTANGLED if self.entangled else VERDICT_INCONCLUSIVE

    def to_payload(self) -> dict[str, Any]:
        payload: dict[str, Any] = {
            "criterion": self.criterion,
            "povm": list(self.povms),
            "a": list(self.a),
            "b": list(self.b),
            "trace_norm": self.trace_norm,
            "bound": self.bound,
            "margin": self.margin,
            "entangled": self.entangled,
            "verdict": self.verdict,
        }
        if self.bipartition_q is not None:
            payload["bipartition_q"] = self.bipartition_q
        if self.state_label is not None:
            payload["state_label"] = self.state_label
        if self.note is not None:
            payload["note"] = self.note
        return payload


def _as_vector(values: Sequence[float] | np.ndarray | None) -> np.ndarray:
    if values is None:
        return np.zeros(0)
    return np.asarray(values, dtype=float).ravel()


def augmented_matrix(
    a: Sequence[float] | np.ndarray,
    b: Sequence[float] | np.ndarray,
    p: CorrelationMatrix | np.ndarray,
    tau: np.ndarray,
    sigma: np.ndarray,
) -> AugmentedMatrix:
    """
    Assemble Q_{a,b}; empty a and b give Q = P.

    Raises:
        DimensionMismatchError: If tau/sigma lengths do not match P.
    """
    entries = p.entries if isinstance(p, CorrelationMatrix) else np.asarray(p, dtype=float)
    tau = _as_vector(tau)
    sigma = _as_vector(sigma)
    if entries.ndim != 2:
        raise DimensionMismatchError(f"P must be a matrix, got shape {entries.shape}")
    if tau.size != entries.shape[0] or sigma.size != entries.shape[1]:
        raise DimensionMismatchError(
            f"Marginals of length ({tau.size}, {sigma.size}) do not match P of shape {entries.shape}"
        )
    return AugmentedMatrix(a=_as_vector(a), b=_as_vector(b), p=entries, tau=tau, sigma=sigma)


def party_factor(d: int, n_outcomes: int, x: float) -> float:
    """(d-1)(d^2 + M^2 x)/(d M (M-1)); same value as coincidence_bound."""
    return coincidence_bound(d, n_outcomes, x)


def theorem1_bound(
    a: Sequence[float] | np.ndarray,
    b: Sequence[float] | np.ndarray,
    d_a: int,
    m_a: int,
    x_a: float,
    d_b: int,
    m_b: int,
    x_b: float,
) -> float:
    a_sq = float(np.sum(_as_vector(a) ** 2))
    b_sq = float(np.sum(_as_vector(b) ** 2))
    return math.sqrt(a_sq + party_factor(d_a, m_a, x_a)) * math.sqrt(b_sq + party_factor(d_b, m_b, x_b))


def gsic_bound(
    a: Sequence[float] | np.ndarray,
    b: Sequence[float] | np.ndarray,
    d_a: int,
    x_a: float,
    d_b: int,
    x_b: float,
) -> float:
    a_sq = float(np.sum(_as_vector(a) ** 2))
    b_sq = float(np.sum(_as_vector(b) ** 2))
    factor_a = (x_a * d_a**2 + 1) / (d_a * (d_a + 1))
    factor_b = (x_b * d_b**2 + 1) / (d_b * (d_b + 1))
    return math.sqrt(a_sq + factor_a) * math.sqrt(b_sq + factor_b)


def mum_bound(a: Sequence[float] | np.ndarray, b: Sequence[float] | np.ndarray, x_a: float, x_b: float) -> float:
    a_sq = float(np.sum(_as_vector(a) ** 2))
    b_sq = float(np.sum(_as_vector(b) ** 2))
    return math.sqrt((a_sq + 1 + x_a) * (b_sq + 1 + x_b))


def theorem2_bound(
    a: Sequence[float] | np.ndarray,
    b: Sequence[float] | np.ndarray,
    q: int,
    parties: Sequence[PartyParameters],
) -> float:
    """
    Bound for the split A_q | rest of an n-party fully separable state.

    Args:
        q: 1-based index of the row party.
        parties: (d, M, x) for every party in tensor order.
    """
    n = len(parties)
    if not 1 <= q <= n:
        raise ParameterRangeError(f"Party index q={q} out of range 1..{n}")
    a_sq = float(np.sum(_as_vector(a) ** 2))
    b_sq = float(np.sum(_as_vector(b) ** 2))
    row = parties[q - 1]
    rest = math.prod(party_factor(p.d, p.n_outcomes, p.x) for i, p in enumerate(parties) if i != q - 1)
    return math.sqrt(a_sq + party_factor(row.d, row.n_outcomes, row.x)) * math.sqrt(b_sq + rest)


def _bipartite_augmented(
    rho: DensityMatrix,
    povm_a: SymmetricPovm,
    povm_b: SymmetricPovm,
    a: np.ndarray,
    b: np.ndarray,
) -> AugmentedMatrix:
    p = probability_matrix_bipartition([povm_a, povm_b], rho, 1)
    state = rho if rho.dims == (povm_a.d, povm_b.d) else DensityMatrix(rho.matrix, (povm_a.d, povm_b.d))
    tau = marginal_vector(povm_a, state.reduced([0])).entries
    sigma = marginal_vector(povm_b, state.reduced([1])).entries
    return augmented_matrix(a, b, p, tau, sigma)


def _report(
    criterion: str,
    augmented: AugmentedMatrix,
    bound: float,
    povms: Sequence[SymmetricPovm],
    rho: DensityMatrix,
    *,
    q: int | None = None,
) -> CriterionReport:
    value = augmented.trace_norm()
    margin = value - bound
    entangled = margin > 0
    note = None
    if criterion == "theorem2":
        note = "not fully separable" if entangled else "inconclusive for full separability"
    report = CriterionReport(
        criterion=criterion,
        povms=tuple(povm.summary() for povm in povms),
        a=tuple(float(v) for v in augmented.a),
        b=tuple(float(v) for v in augmented.b),
        trace_norm=value,
        bound=bound,
        margin=margin,
        entangled=entangled,
        bipartition_q=q,
        state_label=rho.label,
        note=note,
    )
    log_event(
        logging.getLogger(__name__),
        logging.DEBUG,
        Event.CRITERION_EVALUATED,
        "Criterion evaluated",
        criterion=criterion,
        state=rho.label,
        trace_norm=value,
        bound=bound,
        margin=margin,
    )
    return report


def evaluate_bipartite(
    rho: DensityMatrix,
    povm_a: SymmetricPovm,
    povm_b: SymmetricPovm,
    a: Sequence[float] | np.ndarray | None = None,
    b: Sequence[float] | np.ndarray | None = None,
) -> CriterionReport:
    """
    General bipartite criterion for any pair of (N,M)-POVMs.

    Raises:
        DimensionMismatchError: If the state does not live on d_A ⊗ d_B.
    """
    a_vec, b_vec = _as_vector(a), _as_vector(b)
    augmented = _bipartite_augmented(rho, povm_a, povm_b, a_vec, b_vec)
    bound = theorem1_bound(
        a_vec, b_vec, povm_a.d, povm_a.n_outcomes, povm_a.x, povm_b.d, povm_b.n_outcomes, povm_b.x
    )
    return _report("theorem1", augmented, bound, (povm_a, povm_b), rho)


def _require_shape(povm: SymmetricPovm, expected: tuple[int, int], family: str) -> None:
    if povm.layout.shape != expected:
        raise PovmShapeError(
            f"{family} criterion needs (N, M) = {expected} for d={povm.d}, got {povm.layout.shape}"
        )


def evaluate_gsic(
    rho: DensityMatrix,
    povm_a: SymmetricPovm,
    povm_b: SymmetricPovm,
    a: Sequence[float] | np.ndarray | None = None,
    b: Sequence[float] | np.ndarray | None = None,
) -> CriterionReport:
    """Criterion for two GSIC-POVMs, shapes (1, d_A^2) and (1, d_B^2)."""
    _require_shape(povm_a, (1, povm_a.d**2), "GSIC")
    _require_shape(povm_b, (1, povm_b.d**2), "GSIC")
    a_vec, b_vec = _as_vector(a), _as_vector(b)
    augmented = _bipartite_augmented(rho, povm_a, povm_b, a_vec, b_vec)
    bound = gsic_bound(a_vec, b_vec, povm_a.d, povm_a.x, povm_b.d, povm_b.x)
    return _report("gsic", augmented, bound, (povm_a, povm_b), rho)


def evaluate_mum(
    rho: DensityMatrix,
    povm_a: SymmetricPovm,
    povm_b: SymmetricPovm,
    a: Sequence[float] | np.ndarray | None = None,
    b: Sequence[float] | np.ndarray | None = None,
) -> CriterionReport:
    """Criterion for two complete sets of MUMs, shapes (d_A+1, d_A) and (d_B+1, d_B)."""
    _require_shape(povm_a, (povm_a.d + 1, povm_a.d), "MUM")
    _require_shape(povm_b, (povm_b.d + 1, povm_b.d), "MUM")
    a_vec, b_vec = _as_vector(a), _as_vector(b)
    augmented = _bipartite_augmented(rho, povm_a, povm_b, a_vec, b_vec)
    bound = mum_bound(a_vec, b_vec, povm_a.x, povm_b.x)
    return _report("mum", augmented, bound, (povm_a, povm_b), rho)


def equal_entry_vectors(mu: float, nu: float, length: int) -> tuple[np.ndarray, np.ndarray]:
    if length < 0:
        raise ParameterRangeError(f"Baseline vector length must be >= 0, got {length}")
    return np.full(length, float(mu)), np.full(length, float(nu))


def evaluate_baseline_equal_entries(
    rho: DensityMatrix,
    povm_a: SymmetricPovm,
    povm_b: SymmetricPovm,
    mu: float,
    nu: float,
    length: int,
) -> CriterionReport:
    """Bipartite criterion with a = mu(1,...,1), b = nu(1,...,1), both of ``length``."""
    a_vec, b_vec = equal_entry_vectors(mu, nu, length)
    report = evaluate_bipartite(rho, povm_a, povm_b, a_vec, b_vec)
    return CriterionReport(
        criterion="baseline",
        povms=report.povms,
        a=report.a,
        b=report.b,
        trace_norm=report.trace_norm,
        bound=report.bound,
        margin=report.margin,
        entangled=report.entangled,
        state_label=report.state_label,
    )


def optimize_border(
    rho: DensityMatrix,
    povm_a: SymmetricPovm,
    povm_b: SymmetricPovm,
    *,
    length: int = 2,
    starts: Sequence[tuple[Sequence[float], Sequence[float]]] = (),
    maxiter: int = 400,
) -> CriterionReport:
    """
    Search the free vectors a, b (both of ``length``) for the largest margin.

    P, tau and sigma do not depend on a and b, so they are computed once.
    Nelder-Mead runs from a = b = 0 and from every (a, b) in ``starts``;
    each start also counts as a candidate, so the returned margin is never
    below the a = b = 0 margin.

    Raises:
        ParameterRangeError: If length < 1 or a start has the wrong length.
    """
    if length < 1:
        raise ParameterRangeError(f"Border length must be >= 1, got {length}")
    base = _bipartite_augmented(rho, povm_a, povm_b, np.zeros(0), np.zeros(0))
    params_a, params_b = povm_a.parameters, povm_b.parameters

    def negative_margin(z: np.ndarray) -> float:
        a, b = z[:length], z[length:]
        value = AugmentedMatrix(a=a, b=b, p=base.p, tau=base.tau, sigma=base.sigma).trace_norm()
        bound = theorem1_bound(
            a, b, params_a.d, params_a.n_outcomes, params_a.x, params_b.d, params_b.n_outcomes, params_b.x
        )
        return -(value - bound)

    candidates = [np.zeros(2 * length)]
    for a, b in starts:
        a_vec, b_vec = _as_vector(a), _as_vector(b)
        if a_vec.size != length or b_vec.size != length:
            raise ParameterRangeError(f"Start vectors must both have length {length}, got ({a_vec.size}, {b_vec.size})")
        candidates.append(np.concatenate([a_vec, b_vec]))

    best_z = candidates[0]
    best_value = negative_margin(best_z)
    for z0 in candidates:
        start_value = negative_margin(z0)
        if start_value < best_value:
            best_z, best_value = z0, start_value
        result = minimize(
            negative_margin,
            z0,
            method="Nelder-Mead",
            options={"xatol": 1e-10, "fatol": 1e-15, "maxiter": maxiter},
        )
        if result.fun < best_value:
            best_z, best_value = np.asarray(result.x, dtype=float), float(result.fun)

    report = evaluate_bipartite(rho, povm_a, povm_b, best_z[:length], best_z[length:])
    log_event(
        logging.getLogger(__name__),
        logging.DEBUG,
        Event.BORDER_OPTIMIZED,
        "Border vectors optimized",
        state=rho.label,
        starts=len(candidates),
        margin=report.margin,
    )
    return replace(report, note="optimized border")


def evaluate_multipartite(
    rho: DensityMatrix,
    povms: Sequence[SymmetricPovm],
    q: int,
    a: Sequence[float] | np.ndarray | None = None,
    b: Sequence[float] | np.ndarray | None = None,
) -> CriterionReport:
    """
    Full-separability criterion under the split A_q | rest.

    Args:
        rho: n-party state whose dims match the POVM dimensions.
        povms: One POVM per party.
        q: 1-based row party.

    Raises:
        DimensionMismatchError: If the state's factorization does not match.
        ParameterRangeError: If q is outside 1..n.
    """
    dims = tuple(povm.d for povm in povms)
    if rho.dims != dims:
        raise DimensionMismatchError(f"State dims {list(rho.dims)} do not match POVM dimensions {list(dims)}")
    a_vec, b_vec = _as_vector(a), _as_vector(b)
    p = probability_matrix_bipartition(povms, rho, q)
    slot = q - 1
    rest = [index for index in range(len(povms)) if index != slot]
    tau = marginal_vector(povms[slot], rho.reduced([slot])).entries
    sigma = joint_marginal_vector([povms[i] for i in rest], rho.reduced(rest))
    augmented = augmented_matrix(a_vec, b_vec, p, tau, sigma)
    bound = theorem2_bound(a_vec, b_vec, q, [povm.parameters for povm in povms])
    return _report("theorem2", augmented, bound, povms, rho, q=q)


def evaluate(
    criterion: str,
    rho: DensityMatrix,
    povms: Sequence[SymmetricPovm],
    a: Sequence[float] | np.ndarray | None = None,
    b: Sequence[float] | np.ndarray | None = None,
    *,
    q: int = 1,
) -> CriterionReport:
    """
    Dispatch by criterion name.

    States with more than two parties always use the split A_q | rest
    ("theorem2" forces it for two parties). Bipartite criteria put party A
    on the rows, so any other q is rejected rather than ignored.

    Raises:
        ParameterRangeError: Unknown criterion, or q != 1 for a bipartite criterion.
        DimensionMismatchError: If a bipartite criterion does not get two POVMs.
    """
    if rho.n_parties > 2 or criterion == "theorem2":
        return evaluate_multipartite(rho, povms, q, a, b)
    if criterion not in CRITERIA:
        raise ParameterRangeError(f"Unknown criterion '{criterion}'; choose from {[*CRITERIA, 'theorem2']}")
    if q != 1:
        raise ParameterRangeError(f"Party index q={q} applies to the split A_q | rest; bipartite criteria use q=1")
    if len(povms) != 2:
        raise DimensionMismatchError(f"Bipartite criteria need two POVMs, got {len(povms)}")
    handlers = {"theorem1": evaluate_bipartite, "gsic": evaluate_gsic, "mum": evaluate_mum}
    return handlers[criterion](rho, povms[0], povms[1], a, b)
