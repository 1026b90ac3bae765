"""
Joint outcome statistics of local symmetric POVMs.

Flattening convention used for every vector and matrix built here:
parties ascending, and within a party (alpha outer, k inner). For two
parties the correlation matrix P has rows (alpha, k) of party A and
columns (beta, l) of party B, with entries tr[(E_{alpha,k} ⊗ E_{beta,l}) rho].

For n parties split as A_q | rest, the rows belong to party q and the
columns flatten the outcomes of the remaining parties in ascending order.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from symsep.errors import DimensionMismatchError, ParameterRangeError
from symsep.measurement.povm import SymmetricPovm
from symsep.models.state import DensityMatrix

NORMALIZATION_ATOL = 1e-10


@dataclass(frozen=True, eq=False)
class CorrelationMatrix:
    """
    Joint outcome probabilities between one party and the rest.

    Attributes:
        entries: Real matrix (N_q M_q) x prod_{i != q}(N_i M_i).
        row_shape: (N, M) of the row party.
        col_shapes: (N, M) of every column party, ascending party order.
    """
    entries: np.ndarray
    row_shape: tuple[int, int]
    col_shapes: tuple[tuple[int, int], ...]

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape[0], self.entries.shape[1]

    def normalization_error(self) -> float:
        """Largest |1 - sum over outcomes| across every fixed choice of POVM indices."""
        shapes = (self.row_shape,) + self.col_shapes
        tensor = self.entries.reshape([size for shape in shapes for size in shape])
        outcome_axes = tuple(2 * i + 1 for i in range(len(shapes)))
        return float(np.max(np.abs(tensor.sum(axis=outcome_axes) - 1)))

    def row_marginal(self) -> np.ndarray:
        """Sum over the outcomes of every column party for the first POVM choice of each."""
        shapes = self.col_shapes
        tensor = self.entries.reshape([self.shape[0]] + [size for shape in shapes for size in shape])
        index: list[slice | int] = [slice(None)]
        for _ in shapes:
            index.extend([0, slice(None)])
        block = tensor[tuple(index)]
        return block.reshape(self.shape[0], -1).sum(axis=1)


@dataclass(frozen=True, eq=False)
class MarginalVector:
    """Local outcome probabilities tr(E_{alpha,k} rho), (alpha outer, k inner)."""
    entries: np.ndarray
    n_groups: int
    n_outcomes: int

    def block_sums(self) -> np.ndarray:
        return self.entries.reshape(self.n_groups, self.n_outcomes).sum(axis=1)

    def squared_norm(self) -> float:
        return float(self.entries @ self.entries)


def _party_dims(rho: DensityMatrix, povms: Sequence[SymmetricPovm]) -> tuple[int, ...]:
    dims = tuple(povm.d for povm in povms)
    if rho.dims == dims:
        return dims
    if rho.dim == int(np.prod(dims)) and rho.n_parties == 1:
        return dims
    raise DimensionMismatchError(f"State dims {list(rho.dims)} do not match POVM dimensions {list(dims)}")


def joint_probabilities(povms: Sequence[SymmetricPovm], rho: DensityMatrix) -> np.ndarray:
    """
    Joint outcome tensor of shape (N_1, M_1, ..., N_n, M_n).

    Entry [a_1, k_1, ..., a_n, k_n] = tr[(E^1_{a_1,k_1} ⊗ ... ⊗ E^n_{a_n,k_n}) rho].
    """
    if not povms:
        raise DimensionMismatchError("At least one POVM is required")
    dims = _party_dims(rho, povms)
    n = len(povms)
    if 4 * n > len(string.ascii_letters):
        raise DimensionMismatchError(f"Too many parties for a dense contraction: {n}")

    letters = iter(string.ascii_letters)
    operand_specs: list[str] = []
    outputs: list[str] = []
    rows: list[str] = []
    cols: list[str] = []
    for _ in range(n):
        alpha, k, i, j = next(letters), next(letters), next(letters), next(letters)
        operand_specs.append(alpha + k + i + j)
        outputs.append(alpha + k)
        rows.append(i)
        cols.append(j)

    # tr[(⊗E) rho] = sum E_1[i1,j1] ... E_n[in,jn] rho[j1..jn, i1..in]
    state_spec = "".join(cols) + "".join(rows)
    subscripts = ",".join(operand_specs + [state_spec]) + "->" + "".join(outputs)
    state = rho.matrix.reshape(dims + dims)
    tensor = np.einsum(subscripts, *[povm.operators for povm in povms], state, optimize=True)
    return np.real(tensor)


def probability_matrix_bipartition(
    povms: Sequence[SymmetricPovm],
    rho: DensityMatrix,
    q: int,
) -> CorrelationMatrix:
    """
    Correlation matrix under the split A_q | rest.

    Args:
        povms: One POVM per party, in tensor order.
        rho: n-party state.
        q: 1-based index of the row party.

    Raises:
        ParameterRangeError: If q is outside 1..n.
        DimensionMismatchError: If the state does not match the POVMs.
    """
    n = len(povms)
    if not 1 <= q <= n:
        raise ParameterRangeError(f"Party index q={q} out of range 1..{n}")
    if n < 2:
        raise DimensionMismatchError("A bipartition needs at least two parties")
    tensor = joint_probabilities(povms, rho)
    slot = q - 1
    tensor = np.moveaxis(tensor, (2 * slot, 2 * slot + 1), (0, 1))
    row = povms[slot]
    others = [povm for index, povm in enumerate(povms) if index != slot]
    entries = np.ascontiguousarray(tensor.reshape(row.n_groups * row.n_outcomes, -1))
    return CorrelationMatrix(
        entries=entries,
        row_shape=(row.n_groups, row.n_outcomes),
        col_shapes=tuple((povm.n_groups, povm.n_outcomes) for povm in others),
    )


def probability_matrix(povm_a: SymmetricPovm, povm_b: SymmetricPovm, rho: DensityMatrix) -> CorrelationMatrix:
    return probability_matrix_bipartition([povm_a, povm_b], rho, 1)


def marginal_vector(povm: SymmetricPovm, rho_marginal: DensityMatrix) -> MarginalVector:
    entries = povm.probabilities(rho_marginal).ravel()
    return MarginalVector(entries=entries, n_groups=povm.n_groups, n_outcomes=povm.n_outcomes)


def joint_marginal_vector(povms: Sequence[SymmetricPovm], rho: DensityMatrix) -> np.ndarray:
    """Flattened joint probabilities of several parties (the column marginal under A_q | rest)."""
    return joint_probabilities(povms, rho).ravel()


def check_correlation(matrix: CorrelationMatrix, atol: float = NORMALIZATION_ATOL) -> list[str]:
    """Return human-readable violations of the probability-matrix invariants (empty when valid)."""
    problems: list[str] = []
    entries = matrix.entries
    if np.any(entries < -atol) or np.any(entries > 1 + atol):
        problems.append(f"entries outside [0, 1]: min={entries.min():.3e}, max={entries.max():.3e}")
    error = matrix.normalization_error()
    if error > atol:
        problems.append(f"joint blocks do not sum to 1 (max deviation {error:.3e})")
    return problems
