"""Protection of an arbitrary state |psi> by P = 2|psi><psi| - I pulses at UDD times."""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from ddkit.core.linalg import EigenPropagator, is_hermitian
from ddkit.core.sequences import udd_fractions
from ddkit.exceptions import PreconditionError, SequenceError
from ddkit.schemas.report import ProtectionMetrics

logger = logging.getLogger(__name__)


def projector_pulse(psi) -> np.ndarray:
    """
    P_psi = 2 |psi><psi| - I

    Raises:
        PreconditionError: if psi is not a unit vector within 1e-12
    """
    psi = np.asarray(psi, dtype=complex).ravel()
    if abs(np.linalg.norm(psi) - 1.0) > 1e-12:
        raise PreconditionError(f"psi must be normalized, |psi| = {np.linalg.norm(psi)!r}")
    return 2 * np.outer(psi, psi.conj()) - np.eye(psi.size)


@dataclass(frozen=True, eq=False)
class ProtectedSystem:
    """
    Hamiltonian and protected state on one Hilbert space

    Attributes:
        H (np.ndarray): D x D Hermitian matrix
        psi (np.ndarray): unit vector
    """

    H: np.ndarray
    psi: np.ndarray

    def __post_init__(self):
        if np.shape(self.H) != (len(self.psi), len(self.psi)):
            raise PreconditionError("H and psi dimensions differ")
        if not is_hermitian(self.H):
            raise PreconditionError("H is not Hermitian")
        projector_pulse(self.psi)

    @property
    def dim(self) -> int:
        return len(self.psi)

    @cached_property
    def pulse(self) -> np.ndarray:
        return projector_pulse(self.psi)

    @property
    def commuting_part(self) -> np.ndarray:
        """(H + P H P) / 2, left untouched by the pulses"""
        return (self.H + self.pulse @ self.H @ self.pulse) / 2

    @property
    def anticommuting_part(self) -> np.ndarray:
        """(H - P H P) / 2, the part the sequence removes"""
        return (self.H - self.pulse @ self.H @ self.pulse) / 2

    @cached_property
    def propagator(self) -> EigenPropagator:
        return EigenPropagator(self.H)


def random_protected_system(dim: int, seed: int, norm: float = 1.0) -> ProtectedSystem:
    """GUE Hamiltonian of spectral norm `norm` and a Haar-like random state."""
    if dim < 2:
        raise SequenceError(f"dimension must be >= 2, got {dim}")
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    H = (a + a.conj().T) / 2
    H *= norm / np.max(np.abs(np.linalg.eigvalsh(H)))
    psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return ProtectedSystem(H=H, psi=psi / np.linalg.norm(psi))


def protected_propagator(system: ProtectedSystem, order: int, total_time: float,
                         final_pulse: bool = True, skip: Optional[int] = None) -> np.ndarray:
    """
    U = P^{N} e^{-iH(T - T_N)} P ... P e^{-iH T_1} at UDD-N times

    Args:
        system (ProtectedSystem): Hamiltonian and state
        order (int): N >= 0; N = 0 is free evolution
        total_time (float): T
        final_pulse (bool): append the trailing P for odd N
        skip (int, optional): index of a pulse to leave out

    Returns:
        np.ndarray: D x D unitary
    """
    if int(order) != order or order < 0:
        raise SequenceError(f"order must be a non-negative integer, got {order!r}")
    if total_time <= 0:
        raise SequenceError(f"total_time must be positive, got {total_time}")
    edges = np.concatenate(([0.0], total_time * udd_fractions(order), [total_time]))
    unitary = np.eye(system.dim, dtype=complex)
    applied = 0
    for k, interval in enumerate(np.diff(edges)):
        unitary = system.propagator.evolve(interval) @ unitary
        if k < order and k != skip:
            unitary = system.pulse @ unitary
            applied += 1
    if final_pulse and applied % 2 == 1:
        unitary = system.pulse @ unitary
    return unitary


def protection_error(system: ProtectedSystem, U: np.ndarray) -> ProtectionMetrics:
    """
    ||P U - U P||_F plus the leakage out of |psi> and the deficit of <P>

    Leakage is the squared norm of the component of U|psi> orthogonal to |psi>, which
    equals 1 - |<psi|U|psi>|^2 for unitary U without the cancellation. Since
    <P> = 2 |<psi|U|psi>|^2 - 1 the deficit is twice the leakage.
    """
    P = system.pulse
    psi = system.psi
    evolved = U @ psi
    escaped = evolved - psi * np.vdot(psi, evolved)
    leakage = float(np.vdot(escaped, escaped).real)
    return ProtectionMetrics(
        commutator_error=float(np.linalg.norm(P @ U - U @ P)),
        leakage=leakage,
        expectation_deficit=2 * leakage,
    )
