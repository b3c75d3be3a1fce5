"""Dense Hermitian exponentials and unitary logarithms."""

import logging

import numpy as np
import scipy.linalg

from ddkit.exceptions import BranchCutError

logger = logging.getLogger(__name__)

# eigenphases closer than this to +/-pi are rejected by principal_log
BRANCH_CUT_MARGIN = 1e-6


class EigenPropagator:
    """
    exp(-i H t) for a fixed Hermitian H, diagonalized once

    Args:
        hamiltonian (np.ndarray): Hermitian matrix
    """

    def __init__(self, hamiltonian: np.ndarray):
        self.hamiltonian = np.asarray(hamiltonian, dtype=complex)
        try:
            self.energies, self.vectors = np.linalg.eigh(self.hamiltonian)
        except np.linalg.LinAlgError as e:
            logger.error(f"Eigendecomposition failed: {e}")
            raise

    def evolve(self, t: float) -> np.ndarray:
        phases = np.exp(-1j * t * self.energies)
        return np.einsum("ij,j,kj->ik", self.vectors, phases, self.vectors.conj())


def expm_hermitian(hamiltonian: np.ndarray, t: float) -> np.ndarray:
    return EigenPropagator(hamiltonian).evolve(t)


def spectral_norm(matrix: np.ndarray) -> float:
    """Spectral norm of a Hermitian matrix from its eigenvalues."""
    matrix = np.asarray(matrix)
    if matrix.size == 0:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvalsh(matrix))))


def principal_log(unitary: np.ndarray) -> np.ndarray:
    """
    Principal matrix logarithm of a unitary through its complex Schur form

    Args:
        unitary (np.ndarray): unitary matrix

    Returns:
        np.ndarray: log U, anti-Hermitian up to rounding

    Raises:
        BranchCutError: if an eigenphase lies within BRANCH_CUT_MARGIN of +/-pi
    """
    tri, basis = scipy.linalg.schur(np.asarray(unitary, dtype=complex), output="complex")
    angles = np.angle(np.diag(tri))
    worst = float(np.max(np.abs(angles))) if angles.size else 0.0
    if worst > np.pi - BRANCH_CUT_MARGIN:
        raise BranchCutError(f"eigenphase {worst:.12g} is within {BRANCH_CUT_MARGIN} of the branch cut")
    return np.einsum("ij,j,kj->ik", basis, 1j * angles, basis.conj())


def is_hermitian(matrix: np.ndarray, tol: float = 1e-12) -> bool:
    matrix = np.asarray(matrix)
    return bool(np.linalg.norm(matrix - matrix.conj().T) <= tol * max(1.0, np.linalg.norm(matrix)))


def unitarity_residual(unitary: np.ndarray) -> float:
    unitary = np.asarray(unitary)
    return float(np.linalg.norm(unitary.conj().T @ unitary - np.eye(unitary.shape[0])))
