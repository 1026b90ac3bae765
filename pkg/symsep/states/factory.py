"""
Density matrices used by the worked examples, plus seeded random states.

Named states:
    - isotropic(d, q): q |Psi+><Psi+| + (1-q) I/d^2
    - tiles_ppt_state(): (I_9 - sum of five tiles product projectors)/4
    - bound_entangled_be(), rho1(lam): the omega-vector bound entangled
      state and its mixture with |omega_1><omega_1|
    - ghz(n, d): (sum_i |i...i>)/sqrt(d)
    - white_noise_mix(rho, p): (1-p)/dim I + p rho

Random states take an explicit seed and own their generator, so every
call is reproducible and thread-safe:
    - random_density: Ginibre G, rho = G G^dag / tr(G G^dag)
    - random_separable: Dirichlet weights over products of random factors
    - random_product / random_pure_product: single product terms
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np

from symsep.errors import ParameterRangeError
from symsep.linalg.kernel import kron, kron_all
from symsep.models.state import DensityMatrix, maximally_mixed, pure_state


def _ket(d: int, index: int) -> np.ndarray:
    vector = np.zeros(d, dtype=np.complex128)
    vector[index] = 1
    return vector


def _superpose(d: int, coefficients: dict[int, float]) -> np.ndarray:
    vector = sum(coefficient * _ket(d, index) for index, coefficient in coefficients.items())
    return vector / np.linalg.norm(vector)


def _check_unit_interval(name: str, value: float) -> None:
    if not 0 <= value <= 1:
        raise ParameterRangeError(f"{name} must lie in [0, 1], got {value}")


_MINUS_01 = _superpose(3, {0: 1, 1: -1})
_MINUS_12 = _superpose(3, {1: 1, 2: -1})
_UNIFORM = _superpose(3, {0: 1, 1: 1, 2: 1})

# |3> in the printed fifth tiles vector is read as |2> (the space is 3-dimensional)
TILES_VECTORS: tuple[np.ndarray, ...] = (
    kron(_ket(3, 0), _MINUS_01),
    kron(_MINUS_01, _ket(3, 2)),
    kron(_ket(3, 2), _MINUS_12),
    kron(_MINUS_12, _ket(3, 0)),
    kron(_UNIFORM, _UNIFORM),
)

OMEGA_VECTORS: tuple[np.ndarray, ...] = (
    kron(_ket(3, 2), _MINUS_12),
    kron(_ket(3, 0), _MINUS_01),
    kron(_MINUS_01, _ket(3, 2)),
    kron(_MINUS_12, _ket(3, 0)),
    kron(_UNIFORM, _UNIFORM),
)

TILES_PROVENANCE = (
    "The fifth tiles vector is printed with a |3> component in a 3-dimensional space; "
    "it is read as (|0>+|1>+|2>)/sqrt(3), matching the omega-vector construction."
)


def _upb_complement(vectors: Sequence[np.ndarray], label: str) -> DensityMatrix:
    projector = sum(np.outer(v, v.conj()) for v in vectors)
    return DensityMatrix((np.eye(9) - projector) / 4, (3, 3), label)


def isotropic(d: int, q: float) -> DensityMatrix:
    """q |Psi+><Psi+| + (1-q) I/d^2 with |Psi+> = sum_i |ii>/sqrt(d)."""
    _check_unit_interval("q", q)
    psi = sum(kron(_ket(d, i), _ket(d, i)) for i in range(d)) / math.sqrt(d)
    matrix = q * np.outer(psi, psi.conj()) + (1 - q) * np.eye(d * d) / d**2
    return DensityMatrix(matrix, (d, d), f"isotropic(d={d},q={q:g})")


def tiles_ppt_state() -> DensityMatrix:
    return _upb_complement(TILES_VECTORS, "tiles")


def bound_entangled_be() -> DensityMatrix:
    return _upb_complement(OMEGA_VECTORS, "rho_be")


def rho1(lam: float) -> DensityMatrix:
    """lam |omega_1><omega_1| + (1-lam) rho_BE (rank 5 for 0 < lam < 1)."""
    _check_unit_interval("lambda", lam)
    omega = OMEGA_VECTORS[0]
    matrix = lam * np.outer(omega, omega.conj()) + (1 - lam) * bound_entangled_be().matrix
    return DensityMatrix(matrix, (3, 3), f"rho1(lambda={lam:g})")


def white_noise_mix(rho: DensityMatrix, p: float) -> DensityMatrix:
    """(1-p)/dim I + p rho."""
    _check_unit_interval("p", p)
    matrix = (1 - p) * np.eye(rho.dim) / rho.dim + p * rho.matrix
    base = rho.label or "state"
    return DensityMatrix(matrix, rho.dims, f"{base}+noise(p={p:g})")


def ghz(n: int, d: int = 2) -> DensityMatrix:
    if n < 2:
        raise ParameterRangeError(f"GHZ state needs at least 2 parties, got {n}")
    vector = sum(kron_all([_ket(d, i)] * n) for i in range(d))
    return pure_state(vector, (d,) * n, f"ghz(n={n},d={d})")


def _ginibre(d: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    gram = g @ g.conj().T
    # Symmetrize away BLAS rounding so the Hermitian check is exact
    gram = (gram + gram.conj().T) / 2
    return gram / np.real(np.trace(gram))


def _sphere_vector(d: int, rng: np.random.Generator) -> np.ndarray:
    vector = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return vector / np.linalg.norm(vector)


def random_density(d: int, seed: int | None = None, dims: Sequence[int] | None = None) -> DensityMatrix:
    """Ginibre-distributed full-rank state on dimension d (optionally factorized as ``dims``)."""
    rng = np.random.default_rng(seed)
    factor_dims = tuple(dims) if dims is not None else (d,)
    return DensityMatrix(_ginibre(d, rng), factor_dims, f"random(seed={seed})")


def random_pure(d: int, seed: int | None = None) -> DensityMatrix:
    rng = np.random.default_rng(seed)
    return pure_state(_sphere_vector(d, rng), (d,), f"random_pure(seed={seed})")


def random_separable(
    d_a: int,
    d_b: int,
    terms: int,
    seed: int | None = None,
    *,
    pure_factors: bool = False,
) -> DensityMatrix:
    """
    sum_i p_i rho_A^i ⊗ rho_B^i with Dirichlet(1,...,1) weights.

    Factors are Ginibre mixed states, or uniformly random pure states when
    ``pure_factors`` is set.
    """
    if terms < 1:
        raise ParameterRangeError(f"terms must be >= 1, got {terms}")
    rng = np.random.default_rng(seed)
    weights = rng.dirichlet(np.ones(terms)) if terms > 1 else np.ones(1)

    def _factor(d: int) -> np.ndarray:
        if pure_factors:
            v = _sphere_vector(d, rng)
            return np.outer(v, v.conj())
        return _ginibre(d, rng)

    matrix = sum(w * kron(_factor(d_a), _factor(d_b)) for w in weights)
    return DensityMatrix(matrix, (d_a, d_b), f"separable(terms={terms},seed={seed})")


def random_product(dims: Sequence[int], seed: int | None = None, *, pure: bool = False) -> DensityMatrix:
    """Fully product n-party state with independent random factors."""
    rng = np.random.default_rng(seed)
    factors = []
    for d in dims:
        if pure:
            v = _sphere_vector(d, rng)
            factors.append(np.outer(v, v.conj()))
        else:
            factors.append(_ginibre(d, rng))
    return DensityMatrix(kron_all(factors), tuple(dims), f"product(seed={seed})")


def random_pure_product(d_a: int, d_b: int, seed: int | None = None) -> DensityMatrix:
    return random_product((d_a, d_b), seed, pure=True)


def noisy_family(name: str) -> tuple[str, Callable[[float], DensityMatrix]]:
    """
    One-parameter state families exposed to the CLI as ``builtin:<name>``.

    Returns:
        (parameter name, constructor taking the parameter value).
    """
    families: dict[str, tuple[str, Callable[[float], DensityMatrix]]] = {
        "tiles": ("p", lambda p: white_noise_mix(tiles_ppt_state(), p)),
        "isotropic": ("q", lambda q: isotropic(3, q)),
        "rho1": ("lambda", rho1),
        "ghz3": ("p", lambda p: white_noise_mix(ghz(3), p)),
        "maximally_mixed": ("p", lambda p: white_noise_mix(maximally_mixed((3, 3)), p)),
    }
    if name not in families:
        raise ParameterRangeError(f"Unknown builtin state family '{name}'; choose from {sorted(families)}")
    return families[name]
