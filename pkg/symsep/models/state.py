"""
Density matrix value object.

A DensityMatrix is validated once at construction (Hermitian, unit trace,
positive semidefinite within tolerance) and its array is made read-only,
so instances can be shared between threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from symsep.errors import DimensionMismatchError, InvalidStateError
from symsep.linalg.kernel import HERMITIAN_ATOL, hermitian_eigenvalues, is_hermitian, kron, partial_trace

TRACE_ATOL = 1e-12
PSD_ATOL = 1e-10


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """
    Hermitian, unit-trace, positive semidefinite matrix.

    Attributes:
        matrix: Complex dim x dim array (read-only).
        dims: Subsystem factorization; a single-system state has dims == (dim,).
        label: Optional human-readable descriptor echoed in reports.
    """
    matrix: np.ndarray
    dims: tuple[int, ...]
    label: str | None = field(default=None)

    def __post_init__(self) -> None:
        matrix = np.array(self.matrix, dtype=np.complex128)
        dims = tuple(int(d) for d in self.dims)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise InvalidStateError(f"Density matrix must be square, got shape {matrix.shape}")
        if int(np.prod(dims)) != matrix.shape[0]:
            raise DimensionMismatchError(f"dims {list(dims)} do not multiply to {matrix.shape[0]}")
        if not is_hermitian(matrix, HERMITIAN_ATOL):
            raise InvalidStateError("Density matrix is not Hermitian")
        trace = np.trace(matrix)
        if abs(trace - 1) > TRACE_ATOL:
            raise InvalidStateError(f"Density matrix trace is {trace.real:.15g}, expected 1")
        smallest = float(hermitian_eigenvalues(matrix)[0])
        if smallest < -PSD_ATOL:
            raise InvalidStateError(f"Density matrix has negative eigenvalue {smallest:.3e}")
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_parties(self) -> int:
        return len(self.dims)

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    def reduced(self, keep: Sequence[int]) -> "DensityMatrix":
        """Reduced state on the 0-based subsystems in ``keep``."""
        kept = sorted(set(keep))
        reduced = partial_trace(self.matrix, self.dims, kept)
        return DensityMatrix(reduced, tuple(self.dims[k] for k in kept))

    def tensor(self, other: "DensityMatrix") -> "DensityMatrix":
        return DensityMatrix(kron(self.matrix, other.matrix), self.dims + other.dims)

    def with_label(self, label: str | None) -> "DensityMatrix":
        return DensityMatrix(self.matrix, self.dims, label)


def maximally_mixed(dims: Sequence[int]) -> DensityMatrix:
    dim = int(np.prod(dims))
    return DensityMatrix(np.eye(dim) / dim, tuple(dims), label="maximally_mixed")


def pure_state(vector: np.ndarray, dims: Sequence[int], label: str | None = None) -> DensityMatrix:
    """Projector onto the normalized ``vector``."""
    vector = np.asarray(vector, dtype=np.complex128).ravel()
    norm = np.linalg.norm(vector)
    if norm == 0:
        raise InvalidStateError("Cannot build a pure state from the zero vector")
    vector = vector / norm
    return DensityMatrix(np.outer(vector, vector.conj()), tuple(dims), label)
