import numpy as np
import pytest

from symsep.analytics.criteria import (
    evaluate,
    evaluate_bipartite,
    evaluate_multipartite,
    party_factor,
    theorem2_bound,
)
from symsep.errors import DimensionMismatchError, ParameterRangeError
from symsep.measurement.basis import layout
from symsep.measurement.povm import build, t_range
from symsep.pipeline.sweep import make_grid, run_sweep
from symsep.states.factory import ghz, isotropic, random_density, random_product, white_noise_mix


@pytest.fixture(scope="module")
def qubit():
    basis = layout(2, 3, 2)
    return build(basis, t_range(basis).upper / 2)


def test_noisy_ghz_threshold(qubit) -> None:
    result = run_sweep(
        "theorem2",
        "p",
        lambda p: evaluate_multipartite(white_noise_mix(ghz(3), p), [qubit] * 3, 1),
        grid=make_grid(0.0, 1.0, 101),
    )
    assert result.threshold is not None
    assert 0.66 <= result.threshold <= 0.70
    assert result.rows[-1].entangled
    assert not result.rows[0].entangled


def test_ghz_report_notes_full_separability(qubit) -> None:
    report = evaluate_multipartite(ghz(3), [qubit] * 3, 2)
    assert report.entangled
    assert report.bipartition_q == 2
    assert report.note == "not fully separable"
    quiet = evaluate_multipartite(white_noise_mix(ghz(3), 0.0), [qubit] * 3, 1)
    assert quiet.note == "inconclusive for full separability"


def test_two_parties_match_bipartite_criterion(seed: int) -> None:
    povm_a = build(layout(3, 8, 2), 0.05)
    povm_b = build(layout(3, 4, 3), 0.05)
    rho = random_density(9, seed, dims=(3, 3))
    a, b = [0.1, -0.2], [0.3]
    general = evaluate_bipartite(rho, povm_a, povm_b, a, b)
    split = evaluate_multipartite(rho, [povm_a, povm_b], 1, a, b)
    assert split.trace_norm == pytest.approx(general.trace_norm, abs=1e-12)
    assert split.bound == pytest.approx(general.bound, abs=1e-12)

    rho = isotropic(3, 0.9)
    assert evaluate_multipartite(rho, [povm_a, povm_a], 1).margin == pytest.approx(
        evaluate_bipartite(rho, povm_a, povm_a).margin, abs=1e-12
    )


@pytest.mark.parametrize("q", [1, 2, 3])
def test_fully_product_states_are_never_flagged(q: int, seed: int) -> None:
    qubit = build(layout(2, 3, 2), 0.2)
    qutrit = build(layout(3, 4, 3), 0.1)
    rng = np.random.default_rng(seed + q)
    for offset in range(200):
        rho = random_product((2, 3, 2), seed + 1000 * q + offset, pure=offset % 2 == 0)
        a = rng.uniform(-0.3, 0.3, size=2)
        b = rng.uniform(-0.3, 0.3, size=2)
        report = evaluate_multipartite(rho, [qubit, qutrit, qubit], q, a, b)
        assert report.margin <= 1e-10


def test_bound_uses_product_of_remaining_factors(qubit) -> None:
    params = [qubit.parameters] * 3
    value = theorem2_bound([], [], 1, params)
    factor = party_factor(2, 2, qubit.x)
    assert value == pytest.approx(np.sqrt(factor) * np.sqrt(factor**2), rel=1e-12)
    with pytest.raises(ParameterRangeError):
        theorem2_bound([], [], 4, params)


def test_dispatcher_routes_multiparty_states(qubit) -> None:
    report = evaluate("theorem1", ghz(3), [qubit] * 3, q=3)
    assert report.criterion == "theorem2"
    assert report.bipartition_q == 3
    with pytest.raises(DimensionMismatchError):
        evaluate_multipartite(ghz(3), [qubit] * 2, 1)
