import math

import numpy as np
import pytest

from ddkit.core.finitebath import (
    QubitBathHamiltonian,
    cdd_precision,
    dephasing_error,
    effective_generator,
    error_metrics,
    free_propagator,
    full_norm,
    hamiltonian_norms,
    optimal_cdd_order,
    optimal_udd_order,
    pauli_decompose,
    random_hamiltonian,
    sequence_propagator,
    toggling_propagator,
    udd_precision,
)
from ddkit.core.linalg import principal_log, unitarity_residual
from ddkit.core.orderfit import fit_order, make_time_grid
from ddkit.core.sequences import build_sequence, generate_udd
from ddkit.exceptions import BranchCutError, PreconditionError


def sweep_slope(H, family, n, metric, m=None, axis=None, t_max=0.4):
    pairs = []
    for t in make_time_grid(t_max, points=12):
        metrics = error_metrics(H, build_sequence(family, n, m, t, axis))
        pairs.append((t, getattr(metrics, metric)))
    result = fit_order(pairs)
    assert result.valid, pairs
    return result


def test_random_hamiltonian_norms():
    H = random_hamiltonian(6, alpha=1.3, beta=0.4, seed=1)
    alpha, beta = hamiltonian_norms(H)
    assert alpha == pytest.approx(1.3)
    assert beta == pytest.approx(0.4)
    again = random_hamiltonian(6, alpha=1.3, beta=0.4, seed=1)
    np.testing.assert_array_equal(H.matrix, again.matrix)


def test_hamiltonian_split():
    H = random_hamiltonian(3, alpha=1.0, beta=0.5, seed=2)
    np.testing.assert_allclose(H.dephasing_part + H.relaxation_part, H.matrix, atol=1e-14)
    assert not H.is_pure_dephasing
    assert random_hamiltonian(3, 1.0, 0.5, seed=2, pure_dephasing=True).is_pure_dephasing


def test_non_hermitian_bath_operator_rejected():
    zero = np.zeros((2, 2))
    with pytest.raises(PreconditionError):
        QubitBathHamiltonian(C=np.array([[0, 1], [0, 0]]), X=zero, Y=zero, Z=zero)


def test_scalar_bath_coherence_phase():
    z, t = 0.7, 1.9
    H = QubitBathHamiltonian(C=np.zeros((1, 1)), X=np.zeros((1, 1)), Y=np.zeros((1, 1)), Z=np.array([[z]]))
    U, parity = sequence_propagator(H, build_sequence("free", total_time=t))
    assert parity == "I"
    assert U[0, 0] * np.conj(U[1, 1]) == pytest.approx(np.exp(-2j * z * t), abs=1e-14)


def test_pauli_decomposition_reconstructs(general_h):
    U = free_propagator(general_h, 0.3)
    parts = pauli_decompose(U)
    np.testing.assert_allclose(parts.reconstruct(), U, atol=1e-14)
    generator = pauli_decompose(general_h.matrix)
    np.testing.assert_allclose(generator.A_Z, general_h.Z, atol=1e-14)
    np.testing.assert_allclose(generator.A_I, general_h.C, atol=1e-14)


def test_sequence_propagator_is_unitary(general_h):
    U, parity = sequence_propagator(general_h, build_sequence("qdd", 2, 2, total_time=0.8))
    assert unitarity_residual(U) < 1e-12
    assert parity in ("I", "X", "Y", "Z")


def test_dephasing_error_matches_propagator_channel(pure_dephasing_h):
    for family, n in (("udd", 3), ("udd", 4), ("cpmg", 2), ("free", 0)):
        seq = build_sequence(family, n, total_time=0.6)
        conditioned = dephasing_error(pure_dephasing_h, seq)
        assert error_metrics(pure_dephasing_h, seq).dephasing_error == pytest.approx(conditioned, rel=1e-10, abs=1e-13)


def test_dephasing_error_requires_pure_dephasing(general_h):
    with pytest.raises(PreconditionError):
        dephasing_error(general_h, generate_udd(2, 0.5))


@pytest.mark.parametrize("dim", [2, 4, 8])
@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_udd_universality(dim, n):
    H = random_hamiltonian(dim, alpha=1.0, beta=0.5, seed=100 + dim, pure_dephasing=True)
    result = sweep_slope(H, "udd", n, "dephasing_error")
    assert result.slope == pytest.approx(n + 1, abs=0.3)
    assert result.r_squared >= 0.99


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_z_axis_udd_removes_relaxation(general_h, n):
    relaxation = sweep_slope(general_h, "udd", n, "generator_relaxation", axis="Z")
    dephasing = sweep_slope(general_h, "udd", n, "generator_dephasing", axis="Z")
    assert relaxation.slope >= n + 1 - 0.3
    assert dephasing.slope <= 1.5


@pytest.mark.parametrize("level", [1, 2, 3, 4])
def test_cdd_order(pure_dephasing_h, level):
    result = sweep_slope(pure_dephasing_h, "cdd", level, "dephasing_error")
    assert result.slope == pytest.approx(level + 1, abs=0.3)


def test_general_cdd_level_one_removes_every_channel(general_h):
    for metric in ("generator_dephasing", "generator_relaxation", "dephasing_error", "relaxation_error"):
        assert sweep_slope(general_h, "cdd4", 1, metric).slope >= 2 - 0.3


@pytest.mark.parametrize("family, n", [("qdd", 1), ("qdd", 2), ("qdd", 3), ("cudd", 1), ("cudd", 2)])
def test_nested_sequences_remove_both_channels(general_h, family, n):
    for metric in ("generator_dephasing", "generator_relaxation"):
        assert sweep_slope(general_h, family, n, metric, m=n).slope >= n + 1 - 0.5


def test_errors_decrease_with_more_pulses_at_fixed_time(pure_dephasing_h):
    T = 0.5
    cdd = [dephasing_error(pure_dephasing_h, build_sequence("cdd", n, total_time=T)) for n in range(1, 5)]
    cpmg = [dephasing_error(pure_dephasing_h, build_sequence("cpmg", n, total_time=T)) for n in (1, 2, 4, 8)]
    assert all(a > b for a, b in zip(cdd, cdd[1:]))
    assert all(a > b for a, b in zip(cpmg, cpmg[1:]))


def test_effective_generator_first_order(general_h):
    T = 1e-3
    generator = effective_generator(toggling_propagator(general_h, generate_udd(1, T)), T)
    np.testing.assert_allclose(generator.A_I, general_h.C, atol=1e-2)
    np.testing.assert_allclose(generator.A_X, general_h.X, atol=1e-2)
    assert generator.norm("Y") < 1e-2
    assert generator.norm("Z") < 1e-2


def test_principal_log_branch_cut():
    with pytest.raises(BranchCutError):
        principal_log(np.diag([-1.0, 1.0]).astype(complex))
    theta = 0.4
    np.testing.assert_allclose(principal_log(np.diag([np.exp(1j * theta), 1.0])), np.diag([1j * theta, 0.0]), atol=1e-14)


def test_precision_diagnostics(pure_dephasing_h):
    norm = full_norm(pure_dephasing_h)
    T = 0.2
    for n in range(1, 6):
        error = dephasing_error(pure_dephasing_h, generate_udd(n, T))
        assert error * math.factorial(n) / (norm * T) ** n < 10
    assert udd_precision(2.0, 0.5, 3) == pytest.approx(1 / 6)
    assert cdd_precision(1.0, 0.5, 2) == pytest.approx(0.25 / 4)
    assert optimal_udd_order(2.0, 0.05) == pytest.approx(10.0)
    assert optimal_cdd_order(1.0, 0.25) == pytest.approx(2.0)


def scalar_bath(z):
    zero = np.zeros((1, 1))
    return QubitBathHamiltonian(C=zero, X=zero, Y=zero, Z=np.array([[z]]))


def test_scalar_bath_echo_refocuses_exactly():
    H = scalar_bath(0.9)
    for t in (0.1, 1.0, 5.0):
        assert dephasing_error(H, build_sequence("hahn", total_time=t)) < 1e-15


@pytest.mark.parametrize("s,t", [(0.1, 0.2), (0.35, 1.1), (2.0, 3.0)])
def test_free_propagator_semigroup(general_h, s, t):
    combined = free_propagator(general_h, s) @ free_propagator(general_h, t)
    np.testing.assert_allclose(combined, free_propagator(general_h, s + t), atol=1e-12)


@pytest.mark.parametrize("t", [0.05, 0.3, 0.8])
def test_generator_of_free_evolution_is_the_hamiltonian(general_h, t):
    generator = effective_generator(free_propagator(general_h, t), t)
    np.testing.assert_allclose(generator.reconstruct(), general_h.matrix, atol=1e-9)


def test_sweep_across_the_branch_cut_drops_only_the_generator_channels():
    H = scalar_bath(1.0)
    grid = make_time_grid(np.pi, points=12)
    metrics = [error_metrics(H, build_sequence("free", total_time=t)) for t in grid]
    assert metrics[-1].generator_dephasing is None
    assert metrics[-1].generator_relaxation is None
    assert metrics[-1].dephasing_error == pytest.approx(0.0, abs=1e-12)
    assert all(m.generator_dephasing is not None for m in metrics[:-1])

    generator = [np.nan if m.generator_dephasing is None else m.generator_dephasing for m in metrics]
    result = fit_order(list(zip(grid, generator)), ceiling=10.0)
    assert result.valid
    assert result.points_used == len(grid) - 1
    assert result.slope == pytest.approx(1.0, abs=1e-9)
