"""Single-qubit Pauli group modulo phase."""

from typing import Iterable

import numpy as np

PAULIS = {
    "I": np.array([[1, 0], [0, 1]], dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# (x, z) symplectic bits; multiplication modulo phase is XOR
_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_LABELS = {bits: label for label, bits in _BITS.items()}


def multiply(*labels: str) -> str:
    """Product of Pauli labels with the global phase dropped."""
    x, z = 0, 0
    for label in labels:
        bx, bz = _BITS[label]
        x ^= bx
        z ^= bz
    return _LABELS[(x, z)]


def product(labels: Iterable[str]) -> str:
    return multiply(*labels)


def anticommutes_with_z(label: str) -> bool:
    # X and Y flip sigma_z
    return _BITS[label][0] == 1


def matrix(label: str) -> np.ndarray:
    return PAULIS[label]
