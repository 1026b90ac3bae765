"""
Traceless orthonormal Hermitian operator bases and their (N, M) layouts.

The generalized Gell-Mann family is generated in one fixed order used
everywhere in the library:

    for each pair j < k (lexicographic): X(j,k), Y(j,k)
    then the diagonal operators D(1) .. D(d-1)

with X(j,k) = (|j><k| + |k><j|)/sqrt(2), Y(j,k) = (-i|j><k| + i|k><j|)/sqrt(2)
and D(l) = (sum_{m<l} |m><m| - l|l><l|)/sqrt(l(l+1)). Every operator
satisfies tr(G) = 0 and tr(G G') = delta.

For d = 3 this order chunked into groups of one reproduces the (8,2) listing
of the worked examples and chunked into groups of two reproduces the MUM
(4,3) grouping. Any other grouping can be requested explicitly by label with
``layout_from_labels``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from symsep.errors import LayoutError


@dataclass(frozen=True, eq=False)
class OperatorBasisLayout:
    """
    Gell-Mann operators grouped into the (N, M-1) grid of an IC (N,M)-POVM.

    Attributes:
        d: Hilbert space dimension.
        n_groups: N, number of POVMs.
        n_outcomes: M, outcomes per POVM.
        groups: N tuples of M-1 operators G_{alpha,k}.
        labels: Matching labels, e.g. ("X(0,1)", "Y(0,1)").
    """
    d: int
    n_groups: int
    n_outcomes: int
    groups: tuple[tuple[np.ndarray, ...], ...]
    labels: tuple[tuple[str, ...], ...]

    @property
    def shape(self) -> tuple[int, int]:
        return self.n_groups, self.n_outcomes

    def flat_labels(self) -> list[str]:
        return [label for group in self.labels for label in group]


def _pairs(d: int) -> list[tuple[int, int]]:
    return [(j, k) for j in range(d) for k in range(j + 1, d)]


def gell_mann_labels(d: int) -> list[str]:
    if d < 2:
        raise LayoutError(f"Dimension must be >= 2, got {d}")
    labels: list[str] = []
    for j, k in _pairs(d):
        labels.append(f"X({j},{k})")
        labels.append(f"Y({j},{k})")
    labels.extend(f"D({level})" for level in range(1, d))
    return labels


def gell_mann_basis(d: int) -> list[np.ndarray]:
    """
    Generalized Gell-Mann matrices normalized to tr(G^2) = 1.

    Args:
        d: Dimension (>= 2).

    Returns:
        d^2 - 1 Hermitian, traceless, pairwise orthonormal d x d matrices in
        the library-wide generation order (see module docstring).

    Raises:
        LayoutError: If d < 2.

    Example:
        >>> [g * np.sqrt(2) for g in gell_mann_basis(2)]  # Pauli X, Y, Z
    """
    if d < 2:
        raise LayoutError(f"Dimension must be >= 2, got {d}")
    scale = 1 / math.sqrt(2)
    basis: list[np.ndarray] = []
    for j, k in _pairs(d):
        sym = np.zeros((d, d), dtype=np.complex128)
        sym[j, k] = sym[k, j] = scale
        antisym = np.zeros((d, d), dtype=np.complex128)
        antisym[j, k] = -1j * scale
        antisym[k, j] = 1j * scale
        basis.extend([sym, antisym])
    for level in range(1, d):
        diag = np.zeros(d, dtype=np.complex128)
        diag[:level] = 1
        diag[level] = -level
        basis.append(np.diag(diag / math.sqrt(level * (level + 1))))
    return basis


def _check_shape(d: int, n_groups: int, n_outcomes: int) -> None:
    if d < 2:
        raise LayoutError(f"Dimension must be >= 2, got {d}")
    if n_outcomes < 2 or n_groups < 1:
        raise LayoutError(f"Need N >= 1 and M >= 2, got N={n_groups}, M={n_outcomes}")
    if (n_outcomes - 1) * n_groups != d * d - 1:
        raise LayoutError(
            "Informational completeness requires (M-1)*N = d^2-1: "
            f"({n_outcomes}-1)*{n_groups} != {d * d - 1} for d={d}"
        )


def layout(d: int, n_groups: int, n_outcomes: int) -> OperatorBasisLayout:
    """
    Partition the Gell-Mann basis into N consecutive chunks of M-1 operators.

    Raises:
        LayoutError: If (M-1)*N != d^2-1 or M < 2.
    """
    _check_shape(d, n_groups, n_outcomes)
    basis = gell_mann_basis(d)
    labels = gell_mann_labels(d)
    size = n_outcomes - 1
    groups = tuple(tuple(basis[i * size : (i + 1) * size]) for i in range(n_groups))
    label_groups = tuple(tuple(labels[i * size : (i + 1) * size]) for i in range(n_groups))
    return OperatorBasisLayout(d, n_groups, n_outcomes, groups, label_groups)


def layout_from_labels(d: int, label_groups: Sequence[Sequence[str]]) -> OperatorBasisLayout:
    """
    Build a layout from an explicit grouping of Gell-Mann labels.

    All groups must have the same size M-1 and together cover every basis
    operator exactly once.
    """
    if not label_groups:
        raise LayoutError("At least one group is required")
    n_groups = len(label_groups)
    size = len(label_groups[0])
    if any(len(group) != size for group in label_groups):
        raise LayoutError("All groups must hold the same number of operators")
    _check_shape(d, n_groups, size + 1)

    by_label = dict(zip(gell_mann_labels(d), gell_mann_basis(d)))
    flat = [label for group in label_groups for label in group]
    unknown = [label for label in flat if label not in by_label]
    if unknown:
        raise LayoutError(f"Unknown basis labels for d={d}: {unknown}")
    if len(set(flat)) != len(flat):
        raise LayoutError("Basis labels must not repeat across groups")

    groups = tuple(tuple(by_label[label] for label in group) for group in label_groups)
    labels = tuple(tuple(group) for group in label_groups)
    return OperatorBasisLayout(d, n_groups, size + 1, groups, labels)


def admissible_shapes(d: int) -> list[tuple[int, int]]:
    """All (N, M) with (M-1)N = d^2-1 and M >= 2, ordered by M."""
    if d < 2:
        raise LayoutError(f"Dimension must be >= 2, got {d}")
    total = d * d - 1
    return [(total // size, size + 1) for size in range(1, total + 1) if total % size == 0]


def family_name(d: int, n_groups: int, n_outcomes: int) -> str:
    if n_groups == 1 and n_outcomes == d * d:
        return "gsic"
    if n_groups == d + 1 and n_outcomes == d:
        return "mum"
    if n_outcomes == 2:
        return "binary"
    if n_groups == d - 1 and n_outcomes == d + 2:
        return "d_plus_two"
    return "generic"
