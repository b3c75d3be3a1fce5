"""
Generalized UDD modulation in the theta domain, t = T sin^2(theta/2).

The instantaneous UDD modulation is a square wave in theta with period
2 pi / (N+1). A finite-width pulse shape replaces it with the pair
(f+, f-) = (cos phi, sin phi), which keeps the same symmetries and hence only
the odd multiples of N+1 in its sine series.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Optional, Union

import numpy as np
import scipy.fft

from ddkit.core import sequences
from ddkit.exceptions import ResolutionError, SequenceError
from ddkit.schemas.sequence import PulseSequence

logger = logging.getLogger(__name__)

DEFAULT_GRID = 4096
HARMONIC_TOLERANCE = 1e-6
ENDPOINT_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class GeneralizedModulation:
    """
    Sampled f+/f- on the midpoint theta grid over [0, pi]

    Attributes:
        order (int): N
        theta (np.ndarray): (k + 1/2) pi / M, M a multiple of 2(N+1)
        f_plus (np.ndarray): extended f+ samples
        f_minus (np.ndarray): sqrt(1 - f+^2) with the sign fixed by the symmetries
        free_segment (np.ndarray): the user-supplied f+ on [0, pi/(2N+2)]
    """

    order: int
    theta: np.ndarray
    f_plus: np.ndarray
    f_minus: np.ndarray
    free_segment: np.ndarray = field(repr=False)

    @property
    def normalization_residual(self) -> float:
        return float(np.max(np.abs(self.f_plus**2 + self.f_minus**2 - 1.0)))


@dataclass(frozen=True, eq=False)
class OddHarmonicsReport:
    passed: bool
    order: int
    coefficients: np.ndarray  # c_1 .. c_max_harmonic
    leading: Dict[int, float]  # k -> c_{k(N+1)} for odd k
    worst_ratio: float


@dataclass(frozen=True, eq=False)
class ControlField:
    """Pi-area spikes at the UDD times plus the smooth remainder B_extra(t)."""

    spike_times: np.ndarray
    times: np.ndarray
    b_extra: np.ndarray
    spike_area: float = np.pi


def _grid_for(order: int, grid_size: int) -> np.ndarray:
    block = 2 * (order + 1)
    size = int(np.ceil(grid_size / block)) * block
    return (np.arange(size) + 0.5) * np.pi / size


def build_generalized_modulation(order: int, free_segment, grid_size: int = DEFAULT_GRID) -> GeneralizedModulation:
    """
    Extend a free segment of f+ to [0, pi] by the generalized UDD symmetries

    Args:
        order (int): N >= 1
        free_segment (array-like): f+ sampled uniformly on [0, pi/(2N+2)], endpoints included
        grid_size (int): requested theta grid size, rounded up to a multiple of 2(N+1)

    Returns:
        GeneralizedModulation: normalized f+/f- on the theta grid

    Raises:
        SequenceError: if |f+| > 1 or the endpoint values are not +1
    """
    if int(order) != order or order < 1:
        raise SequenceError(f"order must be a positive integer, got {order!r}")
    segment = np.asarray(free_segment, dtype=float)
    if segment.ndim != 1 or segment.size < 2:
        raise SequenceError("free segment needs at least two samples")
    if np.any(np.abs(segment) > 1.0 + ENDPOINT_TOLERANCE):
        raise SequenceError("free segment values must lie in [-1, 1]")
    if abs(segment[0] - 1.0) > ENDPOINT_TOLERANCE or abs(segment[-1] - 1.0) > ENDPOINT_TOLERANCE:
        raise SequenceError("free segment must start and end at f+ = +1")
    segment = np.clip(segment, -1.0, 1.0)

    theta = _grid_for(order, grid_size)
    half = theta.size // (order + 1)
    quarter = half // 2
    # one quarter period in index space, mirrored and sign-flipped across [0, pi]
    reduced = (np.arange(quarter) + 0.5) * np.pi / theta.size
    g_block = np.interp(reduced, np.linspace(0.0, np.pi / (2 * (order + 1)), segment.size), segment)
    g_half = np.concatenate([g_block, g_block[::-1]])
    sign = np.repeat(np.where(np.arange(order + 1) % 2 == 0, 1.0, -1.0), half)
    g = np.tile(g_half, order + 1)
    return GeneralizedModulation(
        order=int(order),
        theta=theta,
        f_plus=sign * g,
        f_minus=sign * np.sqrt(np.maximum(0.0, 1.0 - g**2)),
        free_segment=segment,
    )


def symmetry_residuals(gm: GeneralizedModulation) -> Dict[str, float]:
    """Largest violation of periodicity, antisymmetry about j h and symmetry about (j + 1/2) h."""
    size = gm.theta.size
    step = size // (gm.order + 1)
    idx = np.arange(size)
    worst = {"normalization": gm.normalization_residual, "periodic": 0.0, "antisymmetric": 0.0, "symmetric": 0.0}
    for values in (gm.f_plus, gm.f_minus):
        shifted = idx + 2 * step
        ok = shifted < size
        if np.any(ok):
            worst["periodic"] = max(worst["periodic"], float(np.max(np.abs(values[shifted[ok]] - values[ok]))))
        for j in range(gm.order + 2):
            for key, centre, sgn in (("antisymmetric", 2 * j * step, -1.0), ("symmetric", (2 * j + 1) * step, 1.0)):
                mirror = centre - 1 - idx
                ok = (mirror >= 0) & (mirror < size)
                if np.any(ok):
                    diff = np.abs(values[mirror[ok]] - sgn * values[ok])
                    worst[key] = max(worst[key], float(np.max(diff)))
    return worst


def sine_coefficients(values: np.ndarray) -> np.ndarray:
    """c_m of sum_m c_m sin(m theta) for samples on the midpoint grid, m = 1..M."""
    values = np.asarray(values, dtype=float)
    return scipy.fft.dst(values, type=2) / values.size


def odd_harmonics_check(
    mod: Union[GeneralizedModulation, PulseSequence, sequences.ModulationFunction],
    max_harmonic: Optional[int] = None,
    tolerance: float = HARMONIC_TOLERANCE,
    grid_size: int = DEFAULT_GRID,
) -> OddHarmonicsReport:
    """
    Check that only odd multiples of N+1 appear in the sine series of f_N(theta)

    Args:
        mod: a generalized modulation, or a single-axis sequence (or its modulation
            function) which is sampled on the theta grid
        max_harmonic (int, optional): highest harmonic inspected, default M/4
        tolerance (float): allowed ratio of a forbidden coefficient to the largest one
        grid_size (int): theta grid size for sequences

    Returns:
        OddHarmonicsReport: verdict, coefficients and the c_{k(N+1)} for odd k

    Raises:
        ResolutionError: if max_harmonic exceeds half the grid size
    """
    if isinstance(mod, sequences.ModulationFunction):
        mod = mod.sequence
    if isinstance(mod, PulseSequence):
        order = mod.count
        _, samples = sequences.theta_samples(mod, _grid_for(order, grid_size).size)
        channels = [samples]
    else:
        order = mod.order
        channels = [mod.f_plus, mod.f_minus]

    size = channels[0].size
    if max_harmonic is None:
        max_harmonic = size // 4
    if max_harmonic > size // 2:
        raise ResolutionError(f"{size} theta samples cannot resolve harmonic {max_harmonic}")

    m = np.arange(1, max_harmonic + 1)
    allowed = (m % (order + 1) == 0) & ((m // (order + 1)) % 2 == 1)
    worst = 0.0
    primary = None
    for values in channels:
        coefficients = sine_coefficients(values)[:max_harmonic]
        if primary is None:
            primary = coefficients
        scale = float(np.max(np.abs(coefficients)))
        if scale == 0.0:
            continue
        if np.any(~allowed):
            worst = max(worst, float(np.max(np.abs(coefficients[~allowed]))) / scale)

    leading = {int(k): float(primary[k * (order + 1) - 1]) for k in (1, 3, 5) if k * (order + 1) <= max_harmonic}
    passed = worst <= tolerance
    logger.debug(f"odd harmonics N={order}: worst ratio {worst:.3e}, passed={passed}")
    return OddHarmonicsReport(passed=passed, order=order, coefficients=primary, leading=leading, worst_ratio=worst)


def control_field(gm: GeneralizedModulation, total_time: float) -> ControlField:
    """
    Control field realizing a generalized modulation

    With (f+, f-) = (cos phi, sin phi) the field is B = dphi/dt. The pi jumps of phi at
    theta = j pi/(N+1) become pi-area spikes at the UDD times; the rest is B_extra.
    """
    if total_time <= 0:
        raise SequenceError(f"total_time must be positive, got {total_time}")
    phi = np.unwrap(np.arctan2(gm.f_minus, gm.f_plus), period=np.pi)
    times = total_time * np.sin(gm.theta / 2) ** 2
    dt_dtheta = 0.5 * total_time * np.sin(gm.theta)
    b_extra = np.gradient(phi, gm.theta) / dt_dtheta
    return ControlField(
        spike_times=total_time * sequences.udd_fractions(gm.order),
        times=times,
        b_extra=b_extra,
    )
