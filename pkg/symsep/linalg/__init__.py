from symsep.linalg.kernel import (
    hermitian_eig_extremes,
    hermitian_eigenvalues,
    is_hermitian,
    kron,
    kron_all,
    numerical_rank,
    partial_trace,
    partial_transpose,
    singular_values,
    trace_norm,
)

__all__ = [
    "kron",
    "kron_all",
    "partial_trace",
    "partial_transpose",
    "singular_values",
    "trace_norm",
    "numerical_rank",
    "is_hermitian",
    "hermitian_eigenvalues",
    "hermitian_eig_extremes",
]
