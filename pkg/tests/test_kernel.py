import numpy as np
import pytest

from symsep.errors import DimensionMismatchError, NotHermitianError
from symsep.linalg.kernel import (
    hermitian_eig_extremes,
    kron,
    kron_all,
    numerical_rank,
    partial_trace,
    partial_transpose,
    trace_norm,
)


def _random_complex(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def _random_state(rng: np.random.Generator, dim: int) -> np.ndarray:
    g = _random_complex(rng, dim, dim)
    rho = g @ g.conj().T
    return rho / np.trace(rho)


def test_kron_identity_and_index_formula(rng: np.random.Generator) -> None:
    assert np.allclose(kron(np.eye(2), np.eye(2)), np.eye(4))
    assert np.allclose(kron(np.diag([1, 0]), np.diag([0, 1])), np.diag([0, 1, 0, 0]))

    a = _random_complex(rng, 3, 3)
    b = _random_complex(rng, 3, 3)
    result = kron(a, b)
    expected = np.zeros((9, 9), dtype=complex)
    for i in range(3):
        for j in range(3):
            for p in range(3):
                for q in range(3):
                    expected[i * 3 + p, j * 3 + q] = a[i, j] * b[p, q]
    assert np.allclose(result, expected, atol=1e-12)


def test_kron_associative_and_bilinear(rng: np.random.Generator) -> None:
    a, b, c = (_random_complex(rng, 2, 2) for _ in range(3))
    assert np.allclose(kron(kron(a, b), c), kron(a, kron(b, c)), atol=1e-12)
    assert np.allclose(kron_all([a, b, c]), kron(a, kron(b, c)), atol=1e-12)
    assert np.allclose(kron(2.5 * a + b, c), 2.5 * kron(a, c) + kron(b, c), atol=1e-12)


def test_partial_trace_product_and_entangled(rng: np.random.Generator) -> None:
    rho_a = _random_state(rng, 3)
    rho_b = _random_state(rng, 3)
    joint = kron(rho_a, rho_b)
    assert np.allclose(partial_trace(joint, [3, 3], [0]), rho_a, atol=1e-12)
    assert np.allclose(partial_trace(joint, [3, 3], [1]), rho_b, atol=1e-12)

    psi = sum(kron(np.eye(3)[i], np.eye(3)[i]) for i in range(3)) / np.sqrt(3)
    assert np.allclose(partial_trace(np.outer(psi, psi.conj()), [3, 3], [0]), np.eye(3) / 3, atol=1e-12)


def test_partial_trace_matches_index_oracle(rng: np.random.Generator) -> None:
    rho = _random_state(rng, 6)
    reduced_a = partial_trace(rho, [2, 3], [0])
    reduced_b = partial_trace(rho, [2, 3], [1])
    oracle_a = np.zeros((2, 2), dtype=complex)
    oracle_b = np.zeros((3, 3), dtype=complex)
    for i in range(2):
        for j in range(2):
            oracle_a[i, j] = sum(rho[i * 3 + k, j * 3 + k] for k in range(3))
    for i in range(3):
        for j in range(3):
            oracle_b[i, j] = sum(rho[k * 3 + i, k * 3 + j] for k in range(2))
    assert np.allclose(reduced_a, oracle_a, atol=1e-12)
    assert np.allclose(reduced_b, oracle_b, atol=1e-12)


def test_partial_trace_preserves_trace(rng: np.random.Generator) -> None:
    rho = _random_state(rng, 12)
    for keep in ([0], [1], [2], [0, 2], [1, 2], [0, 1, 2]):
        assert abs(np.trace(partial_trace(rho, [2, 3, 2], keep)) - 1) < 1e-12


def test_partial_trace_dimension_mismatch() -> None:
    with pytest.raises(DimensionMismatchError):
        partial_trace(np.eye(5), [2, 3], [0])


def test_partial_transpose_of_product_is_local_transpose(rng: np.random.Generator) -> None:
    a = _random_state(rng, 2)
    b = _random_state(rng, 3)
    assert np.allclose(partial_transpose(kron(a, b), [2, 3], 1), kron(a, b.T), atol=1e-12)
    assert np.allclose(partial_transpose(kron(a, b), [2, 3], 0), kron(a.T, b), atol=1e-12)


def test_trace_norm_basic_cases(rng: np.random.Generator) -> None:
    assert trace_norm(np.eye(4)) == pytest.approx(4.0)
    u = rng.standard_normal(5)
    v = rng.standard_normal(7)
    assert trace_norm(np.outer(u, v)) == pytest.approx(np.linalg.norm(u) * np.linalg.norm(v), rel=1e-12)
    assert trace_norm(np.zeros((0, 3))) == 0.0


def test_trace_norm_matches_gram_eigen_oracle(rng: np.random.Generator) -> None:
    x = rng.standard_normal((5, 7))
    eigenvalues = np.linalg.eigvalsh(x @ x.T)
    oracle = float(np.sum(np.sqrt(np.clip(eigenvalues, 0, None))))
    assert trace_norm(x) == pytest.approx(oracle, abs=1e-10)


def test_trace_norm_is_a_norm(rng: np.random.Generator) -> None:
    for _ in range(20):
        x = _random_complex(rng, 4, 6)
        y = _random_complex(rng, 4, 6)
        c = complex(rng.standard_normal(), rng.standard_normal())
        assert trace_norm(x) >= 0
        assert trace_norm(x + y) <= trace_norm(x) + trace_norm(y) + 1e-10
        assert trace_norm(c * x) == pytest.approx(abs(c) * trace_norm(x), abs=1e-10)
        assert trace_norm(x.T) == pytest.approx(trace_norm(x), abs=1e-10)
        assert trace_norm(x.conj().T) == pytest.approx(trace_norm(x), abs=1e-10)


def test_numerical_rank_cutoff() -> None:
    assert numerical_rank(np.diag([1.0, 1e-3, 1e-14])) == 2
    assert numerical_rank(np.zeros((3, 3))) == 0


def test_hermitian_eig_extremes() -> None:
    g = np.diag([1, 1, -2]) / np.sqrt(6)
    low, high = hermitian_eig_extremes(g)
    assert low == pytest.approx(-2 / np.sqrt(6))
    assert high == pytest.approx(1 / np.sqrt(6))
    assert hermitian_eig_extremes(np.eye(3)) == pytest.approx((1.0, 1.0))


def test_hermitian_eig_extremes_matches_polynomial_roots(rng: np.random.Generator) -> None:
    g = _random_complex(rng, 4, 4)
    h = (g + g.conj().T) / 2
    roots = np.sort(np.real(np.roots(np.poly(h))))
    low, high = hermitian_eig_extremes(h)
    assert low == pytest.approx(roots[0], abs=1e-10)
    assert high == pytest.approx(roots[-1], abs=1e-10)


def test_hermitian_eig_extremes_rejects_non_hermitian() -> None:
    with pytest.raises(NotHermitianError):
        hermitian_eig_extremes(np.array([[0, 1], [0, 0]], dtype=float))
