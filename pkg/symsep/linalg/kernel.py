"""
Dense matrix primitives shared by every other module.

All functions are pure and operate on numpy arrays (complex128 unless the
input is real). Nothing here keeps state, so results can be shared freely
between threads.

Conventions:
    - Subsystems are listed in tensor order; a state on d_A ⊗ d_B has
      dims = [d_A, d_B] and row index i_A * d_B + i_B.
    - Singular values below RANK_RTOL × (largest singular value) count as
      zero for rank purposes.
"""

from __future__ import annotations

from functools import reduce
from typing import Iterable, Sequence

import numpy as np
from scipy.linalg import eigvalsh, svdvals

from symsep.errors import DimensionMismatchError, NotHermitianError

HERMITIAN_ATOL = 1e-12
RANK_RTOL = 1e-12


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product; entry (i*rows_b + p, j*cols_b + q) = a[i, j] * b[p, q]."""
    return np.kron(np.asarray(a), np.asarray(b))


def kron_all(matrices: Iterable[np.ndarray]) -> np.ndarray:
    items = list(matrices)
    if not items:
        raise ValueError("kron_all requires at least one matrix")
    return reduce(kron, items)


def _check_square(matrix: np.ndarray, dims: Sequence[int]) -> int:
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DimensionMismatchError(f"Expected a square matrix, got shape {matrix.shape}")
    if any(int(d) < 1 for d in dims):
        raise DimensionMismatchError(f"Subsystem dimensions must be positive: {list(dims)}")
    total = int(np.prod(dims))
    if matrix.shape[0] != total:
        raise DimensionMismatchError(
            f"Matrix dimension {matrix.shape[0]} does not match product of dims {list(dims)} = {total}"
        )
    return total


def partial_trace(rho: np.ndarray, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """
    Reduce a multipartite operator to the subsystems listed in ``keep``.

    Args:
        rho: Square matrix on the tensor product of ``dims``.
        dims: Subsystem dimensions in tensor order.
        keep: 0-based indices of the subsystems to keep (any order; the
            result is always in ascending subsystem order).

    Returns:
        Reduced matrix of dimension prod(dims[k] for k in keep).

    Raises:
        DimensionMismatchError: If rho does not match dims or keep is out of range.
    """
    rho = np.asarray(rho)
    dims = [int(d) for d in dims]
    _check_square(rho, dims)
    n = len(dims)
    kept = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= n for k in kept):
        raise DimensionMismatchError(f"Subsystem index out of range in keep={kept} for {n} subsystems")

    tensor = rho.reshape(dims + dims)
    current = n
    # Trace from the highest axis down so lower axis numbers stay valid
    for axis in sorted((i for i in range(n) if i not in kept), reverse=True):
        tensor = np.trace(tensor, axis1=axis, axis2=axis + current)
        current -= 1

    kept_dim = int(np.prod([dims[k] for k in kept])) if kept else 1
    return tensor.reshape(kept_dim, kept_dim)


def partial_transpose(rho: np.ndarray, dims: Sequence[int], party: int) -> np.ndarray:
    """Transpose the indices of subsystem ``party`` (0-based)."""
    rho = np.asarray(rho)
    dims = [int(d) for d in dims]
    total = _check_square(rho, dims)
    n = len(dims)
    if not 0 <= party < n:
        raise DimensionMismatchError(f"party={party} out of range for {n} subsystems")
    tensor = rho.reshape(dims + dims)
    tensor = np.swapaxes(tensor, party, party + n)
    return tensor.reshape(total, total)


def singular_values(x: np.ndarray) -> np.ndarray:
    """Singular values in non-increasing order."""
    x = np.asarray(x)
    if x.size == 0:
        return np.zeros(0)
    return svdvals(x)


def trace_norm(x: np.ndarray) -> float:
    """Sum of singular values, tr sqrt(X^† X)."""
    return float(np.sum(singular_values(x)))


def numerical_rank(x: np.ndarray, rtol: float = RANK_RTOL) -> int:
    values = singular_values(x)
    if values.size == 0 or values[0] == 0:
        return 0
    return int(np.count_nonzero(values > rtol * values[0]))


def is_hermitian(h: np.ndarray, atol: float = HERMITIAN_ATOL) -> bool:
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        return False
    return bool(np.max(np.abs(h - h.conj().T), initial=0.0) <= atol)


def hermitian_eigenvalues(h: np.ndarray, atol: float = HERMITIAN_ATOL) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix."""
    h = np.asarray(h)
    if not is_hermitian(h, atol):
        raise NotHermitianError(f"Matrix of shape {h.shape} is not Hermitian within {atol:g}")
    return eigvalsh(h)


def hermitian_eig_extremes(h: np.ndarray, atol: float = HERMITIAN_ATOL) -> tuple[float, float]:
    """Smallest and largest eigenvalue of a Hermitian matrix."""
    values = hermitian_eigenvalues(h, atol)
    return float(values[0]), float(values[-1])
