"""
Exact propagation of a qubit coupled to a dense finite-dimensional bath.

H = I (x) C + sigma_x (x) X + sigma_y (x) Y + sigma_z (x) Z, qubit factor first.
"""

import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Tuple

import numpy as np

from ddkit.core import pauli
from ddkit.core.linalg import EigenPropagator, is_hermitian, principal_log, spectral_norm
from ddkit.exceptions import BranchCutError, PreconditionError, SequenceError
from ddkit.schemas.report import ErrorMetrics
from ddkit.schemas.sequence import PulseSequence

logger = logging.getLogger(__name__)

AXES = ("I", "X", "Y", "Z")


@dataclass(frozen=True, eq=False)
class QubitBathHamiltonian:
    """
    Four Hermitian bath operators defining the qubit-bath Hamiltonian

    Attributes:
        C (np.ndarray): pure bath term
        X, Y, Z (np.ndarray): bath operators coupled to sigma_x, sigma_y, sigma_z
    """

    C: np.ndarray
    X: np.ndarray
    Y: np.ndarray
    Z: np.ndarray

    def __post_init__(self):
        shapes = {np.shape(m) for m in (self.C, self.X, self.Y, self.Z)}
        if len(shapes) != 1:
            raise PreconditionError(f"bath operators have mismatched shapes {sorted(shapes)}")
        shape = shapes.pop()
        if len(shape) != 2 or shape[0] != shape[1]:
            raise PreconditionError(f"bath operators must be square, got {shape}")
        for name in ("C", "X", "Y", "Z"):
            if not is_hermitian(getattr(self, name)):
                raise PreconditionError(f"bath operator {name} is not Hermitian")

    @property
    def dim(self) -> int:
        return int(np.shape(self.C)[0])

    def bath_operator(self, axis: str) -> np.ndarray:
        return {"I": self.C, "X": self.X, "Y": self.Y, "Z": self.Z}[axis]

    @cached_property
    def matrix(self) -> np.ndarray:
        return sum(np.kron(pauli.matrix(a), self.bath_operator(a)) for a in AXES)

    @property
    def dephasing_part(self) -> np.ndarray:
        """C' = I (x) C + sigma_z (x) Z"""
        return np.kron(pauli.matrix("I"), self.C) + np.kron(pauli.matrix("Z"), self.Z)

    @property
    def relaxation_part(self) -> np.ndarray:
        """D = sigma_x (x) X + sigma_y (x) Y"""
        return np.kron(pauli.matrix("X"), self.X) + np.kron(pauli.matrix("Y"), self.Y)

    @property
    def is_pure_dephasing(self) -> bool:
        return bool(np.linalg.norm(self.X) < 1e-12 and np.linalg.norm(self.Y) < 1e-12)

    @cached_property
    def propagator(self) -> EigenPropagator:
        return EigenPropagator(self.matrix)


@dataclass(frozen=True, eq=False)
class PauliDecomposition:
    """U = sum_a sigma_a (x) A_a"""

    A_I: np.ndarray
    A_X: np.ndarray
    A_Y: np.ndarray
    A_Z: np.ndarray

    def component(self, axis: str) -> np.ndarray:
        return getattr(self, f"A_{axis}")

    def reconstruct(self) -> np.ndarray:
        return sum(np.kron(pauli.matrix(a), self.component(a)) for a in AXES)

    def norm(self, axis: str) -> float:
        return float(np.linalg.norm(self.component(axis)))


def _gue(rng: np.random.Generator, dim: int) -> np.ndarray:
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (a + a.conj().T) / 2


def _rescaled(matrix: np.ndarray, target: float) -> np.ndarray:
    if target == 0:
        return np.zeros_like(matrix)
    return matrix * (target / spectral_norm(matrix))


def random_hamiltonian(dim: int, alpha: float, beta: float, seed: int, pure_dephasing: bool = False) -> QubitBathHamiltonian:
    """
    Random GUE-style instance with ||C|| = alpha and ||X|| = ||Y|| = ||Z|| = beta

    Args:
        dim (int): bath dimension d >= 2
        alpha (float): spectral norm of C
        beta (float): spectral norm of each coupling operator
        seed (int): RNG seed, the instance is a pure function of (dim, alpha, beta, seed)
        pure_dephasing (bool): zero X and Y after sampling

    Returns:
        QubitBathHamiltonian: the random instance
    """
    if int(dim) != dim or dim < 2:
        raise SequenceError(f"bath dimension must be an integer >= 2, got {dim!r}")
    if alpha < 0 or beta < 0:
        raise SequenceError("alpha and beta must be non-negative")
    rng = np.random.default_rng(seed)
    c, x, y, z = (_gue(rng, dim) for _ in range(4))
    zero = np.zeros((dim, dim), dtype=complex)
    return QubitBathHamiltonian(
        C=_rescaled(c, alpha),
        X=zero if pure_dephasing else _rescaled(x, beta),
        Y=zero if pure_dephasing else _rescaled(y, beta),
        Z=_rescaled(z, beta),
    )


def hamiltonian_norms(H: QubitBathHamiltonian) -> Tuple[float, float]:
    """(alpha, beta) = (||C||, max(||X||, ||Y||, ||Z||)) in the spectral norm."""
    return spectral_norm(H.C), max(spectral_norm(H.X), spectral_norm(H.Y), spectral_norm(H.Z))


def free_propagator(H: QubitBathHamiltonian, t: float) -> np.ndarray:
    return H.propagator.evolve(t)


def pulse_frame(seq: PulseSequence) -> np.ndarray:
    """Time-ordered product of the pulse matrices, P_N ... P_1, phases kept."""
    frame = pauli.matrix("I")
    for axis in seq.axes:
        frame = pauli.matrix(axis) @ frame
    return frame


def sequence_propagator(H: QubitBathHamiltonian, seq: PulseSequence) -> Tuple[np.ndarray, str]:
    """
    Full propagator of the pulsed evolution and the parity of the sequence

    Returns:
        tuple[np.ndarray, str]: U_seq = U_0(tau_{N+1}) P_N ... P_1 U_0(tau_1), parity label
    """
    identity = np.eye(H.dim)
    unitary = np.eye(2 * H.dim, dtype=complex)
    for k, interval in enumerate(np.diff(seq.boundaries)):
        unitary = H.propagator.evolve(interval) @ unitary
        if k < seq.count:
            unitary = np.kron(pauli.matrix(seq.pulses[k].axis), identity) @ unitary
    return unitary, seq.parity


def toggling_propagator(H: QubitBathHamiltonian, seq: PulseSequence) -> np.ndarray:
    """The propagator with the accumulated pulse frame removed, (Q (x) I)^dagger U_seq."""
    unitary, _ = sequence_propagator(H, seq)
    frame = np.kron(pulse_frame(seq), np.eye(H.dim))
    return frame.conj().T @ unitary


def pauli_decompose(U: np.ndarray) -> PauliDecomposition:
    """A_a = (1/2) Tr_qubit[(sigma_a (x) I) U]"""
    U = np.asarray(U, dtype=complex)
    d = U.shape[0] // 2
    blocks = U.reshape(2, d, 2, d)
    parts = {a: np.einsum("ab,biaj->ij", pauli.matrix(a), blocks) / 2 for a in AXES}
    return PauliDecomposition(A_I=parts["I"], A_X=parts["X"], A_Y=parts["Y"], A_Z=parts["Z"])


def conditioned_propagators(H: QubitBathHamiltonian, seq: PulseSequence) -> Tuple[np.ndarray, np.ndarray]:
    """
    U(+) and U(-) of a pure-dephasing Hamiltonian, sigma_z replaced by +1 and -1

    Pulses along X or Y swap the branches; Z pulses leave them alone.
    """
    if not H.is_pure_dephasing:
        raise PreconditionError("conditioned propagators need X = Y = 0")
    up = EigenPropagator(H.C + H.Z)
    down = EigenPropagator(H.C - H.Z)
    plus = np.eye(H.dim, dtype=complex)
    minus = np.eye(H.dim, dtype=complex)
    flipped = False
    for k, interval in enumerate(np.diff(seq.boundaries)):
        plus = (down if flipped else up).evolve(interval) @ plus
        minus = (up if flipped else down).evolve(interval) @ minus
        if k < seq.count and pauli.anticommutes_with_z(seq.pulses[k].axis):
            flipped = not flipped
    return plus, minus


def dephasing_error(H: QubitBathHamiltonian, seq: PulseSequence) -> float:
    """
    ||U(+) - U(-)||_F for a pure-dephasing Hamiltonian

    Raises:
        PreconditionError: if X or Y is non-zero
    """
    plus, minus = conditioned_propagators(H, seq)
    return float(np.linalg.norm(plus - minus))


def effective_generator(U: np.ndarray, total_time: float) -> PauliDecomposition:
    """
    Pauli components of H_eff = (i/T) log U

    Raises:
        BranchCutError: when an eigenphase of U is too close to +/-pi
    """
    if total_time <= 0:
        raise SequenceError(f"total_time must be positive, got {total_time}")
    generator = (1j / total_time) * principal_log(U)
    return pauli_decompose(generator)


def error_metrics(H: QubitBathHamiltonian, seq: PulseSequence) -> ErrorMetrics:
    """
    Residual dephasing and relaxation of the decoupled propagator and of its generator

    The propagator channels are read off (Q (x) I)^dagger U_seq: 2 ||A_Z|| equals the
    conditioned ||U(+) - U(-)|| for pure dephasing. Generator channels are measured on
    T H_eff = i log V so that they carry the same power of T as the propagator channels.
    They are None when an eigenphase of V sits on the branch cut of the logarithm.
    """
    toggled = toggling_propagator(H, seq)
    parts = pauli_decompose(toggled)
    T = seq.total_time
    generator_dephasing = generator_relaxation = None
    try:
        generator = effective_generator(toggled, T)
    except BranchCutError as e:
        logger.warning(f"No effective generator for {seq.label} at T={T:g}: {e}")
    else:
        generator_dephasing = T * generator.norm("Z")
        generator_relaxation = T * (generator.norm("X") + generator.norm("Y"))
    return ErrorMetrics(
        dephasing_error=2 * parts.norm("Z"),
        relaxation_error=parts.norm("X") + parts.norm("Y"),
        generator_dephasing=generator_dephasing,
        generator_relaxation=generator_relaxation,
    )


def udd_precision(norm: float, total_time: float, order: int) -> float:
    """(||H|| T)^N / N!, the precision scale of UDD-N."""
    return (norm * total_time) ** order / math.factorial(order)


def cdd_precision(norm: float, total_time: float, level: int) -> float:
    """(||H|| T)^n / 2^(n^2/2), the precision scale of CDD level n."""
    return (norm * total_time) ** level / 2 ** (level**2 / 2)


def optimal_udd_order(norm: float, tau: float) -> float:
    return 1.0 / (norm * tau)


def optimal_cdd_order(norm: float, tau: float) -> float:
    return -math.log2(norm * tau)


def full_norm(H: QubitBathHamiltonian) -> float:
    return spectral_norm(H.matrix)
