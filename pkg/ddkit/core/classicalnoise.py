"""
Semiclassical dephasing by a stationary Gaussian field Z(t).

The qubit sees H = [omega_0 / 2 + Z(t)] sigma_z, so a modulated sequence picks
up the phase phi = int_0^T F(t) [omega_0 + 2 Z(t)] dt. Z is synthesized as a sum
of cosines on a midpoint frequency grid,

    Z(t) = sum_k sqrt(2 S(w_k) dw / pi) cos(w_k t + phi_k),

whose variance (1/pi) sum_k S(w_k) dw reproduces C(0) of the spectrum.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import scipy.integrate

from ddkit.core.sequences import filter_function, modulation, require_single_axis
from ddkit.exceptions import CoverageError, NonIntegrableSpectrumError, ResolutionError, SequenceError
from ddkit.schemas.bath import NoiseSpectrum
from ddkit.schemas.sequence import PulseSequence
from ddkit.utils import realization_rng

logger = logging.getLogger(__name__)

DEFAULT_OMEGA_MIN_FACTOR = 0.05  # omega_min = factor / T for the soft spectrum
SOFT_BAND_FACTOR = 400.0  # band limit = factor / T when the soft spectrum has no cutoff
GRID_PER_PERIOD = 32  # synthesis points per 2 pi / T
MIN_MODES = 512
QUAD_RELATIVE = 1e-8
MIN_REALIZATIONS = 100


@dataclass(frozen=True, eq=False)
class NoiseTrajectory:
    times: np.ndarray
    values: np.ndarray  # Z(t) in angular-frequency units
    seed: int
    detuning: float = 0.0  # static omega_0


def omega_min(spec: NoiseSpectrum, total_time: float) -> float:
    return spec.omega_min if spec.omega_min is not None else DEFAULT_OMEGA_MIN_FACTOR / total_time


def band_limit(spec: NoiseSpectrum, total_time: float) -> float:
    """Upper end of the frequencies that are synthesized and integrated."""
    if spec.kind == "tabulated":
        return float(spec.omega[-1])
    if spec.cutoff is not None:
        return float(spec.cutoff)
    return SOFT_BAND_FACTOR / total_time


def spectral_density(spec: NoiseSpectrum, omega, total_time: float):
    """
    S(omega) for the given spectrum, zero beyond the band limit

    Raises:
        NonIntegrableSpectrumError: for a soft spectrum with omega_min = 0
    """
    omega = np.asarray(omega, dtype=float)
    upper = band_limit(spec, total_time)
    if spec.kind == "ohmic_sharp":
        values = spec.amplitude * omega
    elif spec.kind == "inverse_quartic_soft":
        low = omega_min(spec, total_time)
        if low <= 0:
            raise NonIntegrableSpectrumError("1/omega^4 spectrum needs omega_min > 0")
        values = spec.amplitude / np.maximum(omega, low) ** 4
    else:
        values = spec.amplitude * np.interp(omega, spec.omega, spec.values, left=spec.values[0], right=0.0)
    return np.where((omega >= 0) & (omega <= upper), values, 0.0)


def synthesis_grid(spec: NoiseSpectrum, total_time: float) -> Tuple[np.ndarray, np.ndarray]:
    """Midpoint frequencies and cosine amplitudes sqrt(2 S dw / pi) over [0, band limit]."""
    upper = band_limit(spec, total_time)
    count = max(MIN_MODES, int(math.ceil(upper * total_time * GRID_PER_PERIOD / (2 * np.pi))))
    width = upper / count
    omegas = (np.arange(count) + 0.5) * width
    amplitudes = np.sqrt(2 * spectral_density(spec, omegas, total_time) * width / np.pi)
    return omegas, amplitudes


def sample_trajectory(spec: NoiseSpectrum, total_time: float, dt: float, seed: int,
                      include: Optional[np.ndarray] = None, detuning: float = 0.0) -> NoiseTrajectory:
    """
    One realization of Z(t) on a uniform grid, extra times (pulse times) merged in

    Raises:
        ResolutionError: if dt > pi / (4 band limit)
    """
    if total_time <= 0 or dt <= 0:
        raise SequenceError("total_time and dt must be positive")
    upper = band_limit(spec, total_time)
    if dt > np.pi / (4 * upper) * (1 + 1e-12):
        raise ResolutionError(f"dt={dt:g} does not resolve the band limit {upper:g}")
    steps = int(math.ceil(total_time / dt))
    times = np.linspace(0.0, total_time, steps + 1)
    if include is not None and len(include):
        times = np.union1d(times, np.asarray(include, dtype=float))
    omegas, amplitudes = synthesis_grid(spec, total_time)
    phases = realization_rng(seed, 0).uniform(0.0, 2 * np.pi, omegas.size)
    values = np.cos(np.outer(times, omegas) + phases) @ amplitudes
    return NoiseTrajectory(times=times, values=values, seed=seed, detuning=detuning)


def accumulated_phase(traj: NoiseTrajectory, seq: PulseSequence) -> float:
    """
    phi = int_0^T F(t) [omega_0 + 2 Z(t)] dt by the trapezoidal rule

    Raises:
        CoverageError: if the trajectory does not span [0, T] or misses a pulse time
    """
    require_single_axis(seq)
    times = traj.times
    tol = 1e-12 * seq.total_time
    if abs(times[0]) > tol or abs(times[-1] - seq.total_time) > tol:
        raise CoverageError(f"trajectory covers [{times[0]}, {times[-1]}], need [0, {seq.total_time}]")
    for t in seq.times:
        if np.min(np.abs(times - t)) > tol:
            raise CoverageError(f"trajectory grid misses the pulse at t={t!r}")
    mids = 0.5 * (times[1:] + times[:-1])
    signs = modulation(seq)(mids)
    field = traj.detuning + 2 * traj.values
    return float(np.sum(signs * 0.5 * (field[1:] + field[:-1]) * np.diff(times)))


def _jackknife_magnitude(samples: np.ndarray) -> Tuple[float, float]:
    n = samples.size
    total = samples.sum()
    leave_one_out = np.abs((total - samples) / (n - 1))
    spread = np.sum((leave_one_out - leave_one_out.mean()) ** 2)
    return float(abs(total / n)), float(np.sqrt((n - 1) / n * spread))


def mc_coherence(spec: NoiseSpectrum, seq: PulseSequence, n_realizations: int, seed: int,
                 method: str = "spectral", dt: Optional[float] = None) -> Tuple[float, float]:
    """
    |<exp(-i phi)>| over independent realizations and its jackknife standard error

    Realization k draws its phases from realization_rng(seed, k), so the estimate does not
    depend on scheduling. The spectral method integrates every cosine exactly against the
    modulation through the filter function; the trajectory method samples Z(t) and uses
    accumulated_phase.

    Args:
        spec (NoiseSpectrum): noise spectrum
        seq (PulseSequence): single-axis sequence
        n_realizations (int): at least 100
        seed (int): master seed
        method (str): "spectral" or "trajectory"
        dt (float, optional): trajectory step, default pi / (4 band limit)

    Returns:
        tuple[float, float]: coherence magnitude and standard error
    """
    if n_realizations < MIN_REALIZATIONS:
        raise SequenceError(f"need at least {MIN_REALIZATIONS} realizations, got {n_realizations}")
    if method not in ("spectral", "trajectory"):
        raise SequenceError(f"unknown method {method!r}")
    require_single_axis(seq)
    T = seq.total_time
    omegas, amplitudes = synthesis_grid(spec, T)
    samples = np.empty(n_realizations, dtype=complex)

    if method == "spectral":
        weights = 2 * amplitudes * filter_function(seq, omegas)
        for k in range(n_realizations):
            phases = realization_rng(seed, k).uniform(0.0, 2 * np.pi, omegas.size)
            phi = float(np.sum((weights * np.exp(1j * phases)).real))
            samples[k] = np.exp(-1j * phi)
    else:
        step = dt if dt is not None else np.pi / (4 * band_limit(spec, T))
        times = np.union1d(np.linspace(0.0, T, int(math.ceil(T / step)) + 1), seq.times)
        basis = np.outer(times, omegas)
        for k in range(n_realizations):
            phases = realization_rng(seed, k).uniform(0.0, 2 * np.pi, omegas.size)
            traj = NoiseTrajectory(times=times, values=np.cos(basis + phases) @ amplitudes, seed=seed)
            samples[k] = np.exp(-1j * accumulated_phase(traj, seq))
    return _jackknife_magnitude(samples)


def decoherence_exponent(spec: NoiseSpectrum, seq: PulseSequence) -> float:
    """
    chi = (2/pi) int_0^inf S(omega) |f(omega)|^2 d omega

    The integral is split every pi/T so that each adaptive quadrature sees at most one
    oscillation of |f|^2.
    """
    require_single_axis(seq)
    T = seq.total_time
    if spec.kind == "inverse_quartic_soft" and omega_min(spec, T) <= 0:
        raise NonIntegrableSpectrumError("1/omega^4 spectrum needs omega_min > 0")
    if spec.amplitude == 0:
        return 0.0
    upper = band_limit(spec, T)
    knots = set(np.linspace(0.0, upper, int(math.ceil(upper * T / np.pi)) + 1).tolist())
    if spec.kind == "inverse_quartic_soft":
        knots.add(min(omega_min(spec, T), upper))
    if spec.kind == "tabulated":
        knots.update(w for w in spec.omega if w <= upper)
    knots = sorted(knots)

    def integrand(w):
        return float(spectral_density(spec, w, T)) * abs(filter_function(seq, w)) ** 2

    pieces = []
    for a, b in zip(knots[:-1], knots[1:]):
        value, _ = scipy.integrate.quad(integrand, a, b, epsrel=QUAD_RELATIVE, epsabs=0.0, limit=200)
        pieces.append(value)
    return 2.0 / np.pi * math.fsum(pieces)


def analytic_coherence(spec: NoiseSpectrum, seq: PulseSequence) -> float:
    return float(np.exp(-decoherence_exponent(spec, seq)))
