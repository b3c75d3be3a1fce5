import numpy as np
import pytest

from ddkit.core.classicalnoise import (
    NoiseTrajectory,
    accumulated_phase,
    analytic_coherence,
    decoherence_exponent,
    mc_coherence,
    sample_trajectory,
    spectral_density,
    synthesis_grid,
)
from ddkit.core.sequences import build_sequence, filter_function, generate_cpmg, generate_udd
from ddkit.exceptions import CoverageError, NonIntegrableSpectrumError, ResolutionError, SequenceError
from ddkit.schemas import NoiseSpectrum
from ddkit.utils import realization_rng

T = 1.0

SPECTRA = {
    "ohmic": NoiseSpectrum(kind="ohmic_sharp", cutoff=20.0),
    "soft": NoiseSpectrum(kind="inverse_quartic_soft", omega_min=1.0),
    "table": NoiseSpectrum(kind="tabulated", omega=(0.0, 5.0, 15.0, 30.0), values=(1.0, 1.0, 0.5, 0.0)),
}

SEQUENCES = {
    "hahn": build_sequence("hahn", total_time=T),
    "cpmg2": generate_cpmg(2, T),
    "udd2": generate_udd(2, T),
    "udd4": generate_udd(4, T),
}


def scaled(spec, seq, chi=0.5):
    """Copy of the spectrum whose decoherence exponent for seq equals chi."""
    unit = decoherence_exponent(spec, seq)
    return NoiseSpectrum(**{**spec.model_dump(), "amplitude": spec.amplitude * chi / unit})


def test_synthesized_variance_matches_spectrum():
    spec = SPECTRA["ohmic"]
    omegas, amplitudes = synthesis_grid(spec, T)
    phases = np.stack([realization_rng(7, k).uniform(0, 2 * np.pi, omegas.size) for k in range(10_000)])
    z0 = np.cos(phases) @ amplitudes
    expected = spec.cutoff**2 / 2 / np.pi  # (1/pi) int_0^wc w dw
    assert np.sum(amplitudes**2) / 2 == pytest.approx(expected, rel=1e-4)
    stderr = np.std(z0**2) / np.sqrt(z0.size)
    assert abs(np.mean(z0**2) - expected) < 3 * stderr


def test_phase_of_a_single_cosine_equals_filter_function():
    seq = generate_udd(3, T)
    omega = 7.3
    times = np.union1d(np.linspace(0.0, T, 20_001), seq.times)
    traj = NoiseTrajectory(times=times, values=np.cos(omega * times), seed=0)
    expected = 2 * filter_function(seq, omega).real
    assert accumulated_phase(traj, seq) == pytest.approx(expected, abs=1e-6)


def test_detuning_is_refocused_by_an_echo():
    seq = build_sequence("hahn", total_time=T)
    times = np.linspace(0.0, T, 101)
    traj = NoiseTrajectory(times=times, values=np.zeros_like(times), seed=0, detuning=3.0)
    assert accumulated_phase(traj, seq) == pytest.approx(0.0, abs=1e-12)
    free = build_sequence("free", total_time=T)
    assert accumulated_phase(traj, free) == pytest.approx(3.0 * T)


def test_trajectory_grid_must_cover_pulses():
    seq = generate_udd(3, T)
    traj = NoiseTrajectory(times=np.linspace(0.0, T, 11), values=np.zeros(11), seed=0)
    with pytest.raises(CoverageError):
        accumulated_phase(traj, seq)


def test_sample_trajectory_resolution_and_determinism():
    spec = SPECTRA["ohmic"]
    with pytest.raises(ResolutionError):
        sample_trajectory(spec, T, dt=0.5, seed=1)
    seq = generate_udd(2, T)
    a = sample_trajectory(spec, T, dt=0.01, seed=1, include=seq.times)
    b = sample_trajectory(spec, T, dt=0.01, seed=1, include=seq.times)
    np.testing.assert_array_equal(a.values, b.values)
    assert set(seq.times) <= set(a.times)


def test_free_evolution_white_limit():
    flat = NoiseSpectrum(kind="tabulated", omega=(0.0, 200.0), values=(1.0, 1.0))
    chi = decoherence_exponent(flat, build_sequence("free", total_time=T))
    assert chi == pytest.approx(2 * T, rel=1e-2)


def test_soft_spectrum_needs_a_regularizer():
    spec = NoiseSpectrum(kind="inverse_quartic_soft", omega_min=0.0)
    with pytest.raises(NonIntegrableSpectrumError):
        decoherence_exponent(spec, generate_udd(2, T))
    with pytest.raises(NonIntegrableSpectrumError):
        spectral_density(spec, np.array([1.0]), T)


def test_zero_amplitude_gives_full_coherence():
    spec = NoiseSpectrum(kind="ohmic_sharp", cutoff=5.0, amplitude=0.0)
    assert analytic_coherence(spec, generate_udd(2, T)) == 1.0


@pytest.mark.parametrize("spectrum", sorted(SPECTRA))
@pytest.mark.parametrize("sequence", sorted(SEQUENCES))
def test_monte_carlo_agrees_with_filter_integral(spectrum, sequence):
    seq = SEQUENCES[sequence]
    spec = scaled(SPECTRA[spectrum], seq)
    expected = analytic_coherence(spec, seq)
    value, stderr = mc_coherence(spec, seq, n_realizations=2000, seed=17)
    assert stderr > 0
    assert abs(value - expected) < 3 * stderr


def test_trajectory_method_agrees_with_spectral_method():
    seq = generate_udd(2, T)
    spec = scaled(NoiseSpectrum(kind="ohmic_sharp", cutoff=10.0), seq)
    spectral, _ = mc_coherence(spec, seq, n_realizations=200, seed=3)
    sampled, _ = mc_coherence(spec, seq, n_realizations=200, seed=3, method="trajectory", dt=1e-3)
    assert sampled == pytest.approx(spectral, abs=1e-3)


def test_mc_arguments_validated():
    with pytest.raises(SequenceError):
        mc_coherence(SPECTRA["ohmic"], generate_udd(2, T), n_realizations=10, seed=0)
    with pytest.raises(SequenceError):
        mc_coherence(SPECTRA["ohmic"], generate_udd(2, T), n_realizations=200, seed=0, method="exact")


@pytest.mark.parametrize("n", [4, 6])
def test_udd_beats_cpmg_below_a_hard_cutoff(n):
    spec = NoiseSpectrum(kind="ohmic_sharp", cutoff=2.0 / T)
    udd = decoherence_exponent(spec, generate_udd(n, T))
    cpmg = decoherence_exponent(spec, generate_cpmg(n // 2, T))
    assert udd < cpmg


@pytest.mark.parametrize("n", [4, 6])
def test_udd_matches_cpmg_for_a_soft_spectrum(n):
    spec = NoiseSpectrum(kind="inverse_quartic_soft", omega_min=40.0 / T)
    ratio = decoherence_exponent(spec, generate_udd(n, T)) / decoherence_exponent(spec, generate_cpmg(n // 2, T))
    assert 0.5 <= ratio <= 2.0


def test_accumulated_phase_is_linear_in_noise_and_detuning():
    seq = generate_udd(3, T)
    times = np.union1d(np.linspace(0.0, T, 401), seq.times)
    rng = np.random.default_rng(5)
    z1, z2 = rng.normal(size=times.size), rng.normal(size=times.size)

    def phase(values, detuning=0.0):
        return accumulated_phase(NoiseTrajectory(times=times, values=values, seed=0, detuning=detuning), seq)

    combined = phase(0.7 * z1 - 1.9 * z2, detuning=2.5)
    expected = 0.7 * phase(z1) - 1.9 * phase(z2) + 2.5 * phase(np.zeros_like(times), detuning=1.0)
    assert combined == pytest.approx(expected, rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("sequence", ["hahn", "udd4"])
def test_coherence_decreases_with_amplitude(sequence):
    seq = SEQUENCES[sequence]
    base = SPECTRA["ohmic"]
    analytic, sampled = [], []
    for chi in (0.05, 0.3, 1.0, 2.5):
        spec = scaled(base, seq, chi)
        analytic.append(analytic_coherence(spec, seq))
        sampled.append(mc_coherence(spec, seq, n_realizations=2000, seed=17)[0])
    assert all(a > b for a, b in zip(analytic, analytic[1:]))
    assert all(a >= b for a, b in zip(sampled, sampled[1:]))
