"""
Pure dephasing of a qubit by independent boson modes, solved with coherent states.

Conditioned on the qubit state, every mode stays coherent and its amplitude
rotates clockwise about -kappa/(2 omega) (qubit up) or +kappa/(2 omega) (qubit
down). A pulse exchanges the two rotation centres.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from ddkit.core.sequences import filter_function, require_single_axis
from ddkit.exceptions import CoverageError, PreconditionError
from ddkit.schemas.bath import BosonMode
from ddkit.schemas.sequence import PulseSequence

logger = logging.getLogger(__name__)

# overlap = exp(-OVERLAP_EXPONENT |P+ - P-|^2); the coherent-state overlap magnitude has 1/2
OVERLAP_EXPONENT = 1.0
GRID_TOLERANCE = 1e-12
DEFAULT_POINTS = 257


@dataclass(frozen=True, eq=False)
class CoherentTrajectoryPair:
    times: np.ndarray
    p_plus: np.ndarray  # (modes, times)
    p_minus: np.ndarray

    @property
    def delta(self) -> np.ndarray:
        return self.p_plus - self.p_minus


@dataclass(frozen=True, eq=False)
class CoherenceTrace:
    times: np.ndarray
    L: np.ndarray

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"time": self.times, "L": self.L})


def _mode_arrays(modes: Sequence[BosonMode]):
    omegas = np.array([m.omega for m in modes], dtype=float)
    kappas = np.array([m.kappa for m in modes], dtype=float)
    return omegas, kappas


def default_grid(seq: PulseSequence, points: int = DEFAULT_POINTS) -> np.ndarray:
    return np.union1d(np.linspace(0.0, seq.total_time, points), seq.boundaries)


def _check_grid(grid: np.ndarray, seq: PulseSequence) -> None:
    tol = GRID_TOLERANCE * seq.total_time
    if grid.ndim != 1 or grid.size == 0 or np.any(np.diff(grid) <= 0):
        raise CoverageError("time grid must be one-dimensional and strictly increasing")
    if abs(grid[0]) > tol or grid[-1] > seq.total_time + tol:
        raise CoverageError(f"time grid must start at 0 and stay within [0, {seq.total_time}]")
    for t in seq.times:
        if np.min(np.abs(grid - t)) > tol:
            raise CoverageError(f"time grid misses the pulse at t={t!r}")


def evolve_pair(modes: Sequence[BosonMode], seq: PulseSequence, p0=None,
                grid: Optional[np.ndarray] = None) -> CoherentTrajectoryPair:
    """
    Exact conditioned coherent-state amplitudes P_{l,+}(t), P_{l,-}(t)

    Args:
        modes (Sequence[BosonMode]): bath modes
        seq (PulseSequence): single-axis sequence
        p0 (complex | array-like, optional): initial amplitudes per mode, default vacuum
        grid (np.ndarray, optional): time grid containing every pulse time

    Returns:
        CoherentTrajectoryPair: amplitudes on the grid; at a pulse time the pre-pulse value

    Raises:
        CoverageError: if the grid misses a pulse time
    """
    require_single_axis(seq)
    grid = default_grid(seq) if grid is None else np.asarray(grid, dtype=float)
    _check_grid(grid, seq)
    omegas, kappas = _mode_arrays(modes)
    centre = kappas / (2 * omegas)
    start = np.broadcast_to(np.asarray(0j if p0 is None else p0, dtype=complex), omegas.shape).copy()

    p_plus = np.empty((omegas.size, grid.size), dtype=complex)
    p_minus = np.empty_like(p_plus)
    plus, minus = start.copy(), start.copy()
    edges = seq.boundaries
    filled = np.zeros(grid.size, dtype=bool)
    for j in range(len(edges) - 1):
        a, b = edges[j], edges[j + 1]
        last = j == len(edges) - 2
        mask = ~filled & (grid <= b + (0 if last else GRID_TOLERANCE * seq.total_time))
        if np.any(mask):
            rot = np.exp(-1j * np.outer(omegas, grid[mask] - a))
            p_plus[:, mask] = (plus + centre)[:, None] * rot - centre[:, None]
            p_minus[:, mask] = (minus - centre)[:, None] * rot + centre[:, None]
            filled |= mask
        rot_end = np.exp(-1j * omegas * (b - a))
        plus, minus = (plus + centre) * rot_end - centre, (minus - centre) * rot_end + centre
        # the pulse exchanges the branches
        plus, minus = minus, plus
    return CoherentTrajectoryPair(times=grid, p_plus=p_plus, p_minus=p_minus)


def delta_final(mode: BosonMode, seq: PulseSequence) -> complex:
    """Delta_{N+1} = i (-1)^{N+1} exp(-i omega T) kappa f(omega)"""
    sign = -1.0 if seq.count % 2 == 0 else 1.0
    phase = np.exp(-1j * mode.omega * seq.total_time)
    return complex(1j * sign * phase * mode.kappa * filter_function(seq, mode.omega))


def coherence(modes: Sequence[BosonMode], seq: PulseSequence, grid: Optional[np.ndarray] = None,
              p0=None) -> CoherenceTrace:
    """L(t) = prod_l exp(-|P_{l,+}(t) - P_{l,-}(t)|^2)"""
    pair = evolve_pair(modes, seq, p0=p0, grid=grid)
    exponent = OVERLAP_EXPONENT * np.sum(np.abs(pair.delta) ** 2, axis=0)
    return CoherenceTrace(times=pair.times, L=np.exp(-exponent))


def decoherence(modes: Sequence[BosonMode], seq: PulseSequence) -> float:
    """1 - L(T) from the closed-form Delta_{N+1}, free of cancellation for small deficits."""
    exponent = OVERLAP_EXPONENT * sum(abs(delta_final(m, seq)) ** 2 for m in modes)
    return float(-np.expm1(-exponent))


def qubit_density_matrix(c_plus: complex, c_minus: complex, L: float, phase: float = 0.0) -> np.ndarray:
    """
    Reduced qubit state with populations |C+|^2, |C-|^2 and coherence C+ C-* L exp(-i phase)

    Raises:
        PreconditionError: if |C+|^2 + |C-|^2 differs from 1 by more than 1e-9
    """
    norm = abs(c_plus) ** 2 + abs(c_minus) ** 2
    if abs(norm - 1.0) > 1e-9:
        raise PreconditionError(f"qubit amplitudes are not normalized: {norm!r}")
    off = c_plus * np.conj(c_minus) * L * np.exp(-1j * phase)
    return np.array([[abs(c_plus) ** 2, off], [np.conj(off), abs(c_minus) ** 2]], dtype=complex)


def ohmic_modes(alpha: float, omega_c: float, count: int) -> List[BosonMode]:
    """
    Hard-cutoff Ohmic bath J(w) = 2 alpha w on (0, omega_c] discretized at midpoints

    Each mode carries kappa_l = 2 sqrt(J(w_l) dw).
    """
    if count < 1 or omega_c <= 0 or alpha < 0:
        raise PreconditionError("ohmic_modes needs count >= 1, omega_c > 0 and alpha >= 0")
    width = omega_c / count
    omegas = (np.arange(count) + 0.5) * width
    kappas = 2 * np.sqrt(2 * alpha * omegas * width)
    return [BosonMode(omega=float(w), kappa=float(k)) for w, k in zip(omegas, kappas)]


def load_modes_csv(path: Union[str, Path]) -> List[BosonMode]:
    """Modes from a CSV with columns omega,kappa; '#' lines are comments."""
    frame = pd.read_csv(path, comment="#")
    missing = {"omega", "kappa"} - set(frame.columns)
    if missing:
        raise PreconditionError(f"{path}: missing columns {sorted(missing)}")
    return [BosonMode(omega=float(w), kappa=float(k)) for w, k in zip(frame["omega"], frame["kappa"])]
