"""Named 1- and 2-qubit unitaries and their application to state vectors"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..core.exceptions import ContractError, InputError
from .statevec import StateVector

UNITARITY_TOLERANCE = 1e-9


def unitarity_deviation(matrix: np.ndarray) -> float:
    """max |(U^dagger U - I)_ij|"""
    product = matrix.conj().T @ matrix
    return float(np.max(np.abs(product - np.eye(matrix.shape[0]))))


@dataclass(frozen=True, eq=False)
class Unitary:
    """2x2 or 4x4 unitary matrix with a display label"""

    matrix: np.ndarray
    label: str = "U"

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=np.complex128)
        if matrix.shape not in ((2, 2), (4, 4)):
            raise InputError(f"only 2x2 and 4x4 unitaries are supported, got shape {matrix.shape}")
        if not np.all(np.isfinite(matrix)):
            raise ContractError(f"{self.label} has non-finite entries")
        deviation = unitarity_deviation(matrix)
        if deviation > UNITARITY_TOLERANCE:
            raise ContractError(f"{self.label} is not unitary: deviation {deviation:.3e}")
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def adjoint(self) -> Unitary:
        return Unitary(self.matrix.conj().T, label=f"{self.label}^dagger")

    def __matmul__(self, other: Unitary) -> Unitary:
        return Unitary(self.matrix @ other.matrix, label=f"{self.label}*{other.label}")

    def __neg__(self) -> Unitary:
        return Unitary(-self.matrix, label=f"-{self.label}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Unitary):
            return NotImplemented
        return np.array_equal(self.matrix, other.matrix)

    __hash__ = None

    def __repr__(self) -> str:
        return f"Unitary({self.label}, dim={self.dim})"


_S = 1 / np.sqrt(2)

I2 = Unitary(np.eye(2), label="I")
X = Unitary([[0, 1], [1, 0]], label="X")
Y = Unitary([[0, -1j], [1j, 0]], label="Y")
Z = Unitary([[1, 0], [0, -1]], label="Z")
H = Unitary([[_S, _S], [_S, -_S]], label="H")
CORR11 = Unitary([[0, -1], [1, 0]], label="CORR11")

I4 = Unitary(np.eye(4), label="I4")
CNOT = Unitary(
    [[1, 0, 0, 0],
     [0, 1, 0, 0],
     [0, 0, 0, 1],
     [0, 0, 1, 0]],
    label="CNOT",
)
SWAP = Unitary(
    [[1, 0, 0, 0],
     [0, 0, 1, 0],
     [0, 1, 0, 0],
     [0, 0, 0, 1]],
    label="SWAP",
)

PAULIS = {"X": X, "Y": Y, "Z": Z}


def _check_index(sv: StateVector, qubit: int) -> None:
    if not 0 <= qubit < sv.n_qubits:
        raise InputError(f"qubit index {qubit} out of range for {sv.n_qubits} qubits")


def _check_pair(sv: StateVector, first: int, second: int) -> None:
    _check_index(sv, first)
    _check_index(sv, second)
    if first == second:
        raise InputError(f"two-qubit operation needs distinct qubits, got {first} twice")


def apply_1q(sv: StateVector, u: Unitary, target: int) -> StateVector:
    if u.dim != 2:
        raise InputError(f"apply_1q needs a 2x2 unitary, got {u.dim}x{u.dim}")
    _check_index(sv, target)

    state = sv.amps.reshape([2] * sv.n_qubits)
    state = np.tensordot(u.matrix, state, axes=([1], [target]))
    return StateVector(np.moveaxis(state, 0, target).reshape(-1))


def apply_cnot(sv: StateVector, control: int, target: int) -> StateVector:
    """Flip `target` on basis states whose `control` bit is 1 (exact permutation)"""
    _check_pair(sv, control, target)
    n = sv.n_qubits
    index = np.arange(1 << n)
    control_bit = (index >> (n - 1 - control)) & 1
    source = index ^ (control_bit << (n - 1 - target))
    return StateVector(sv.amps[source])


def apply_2q(sv: StateVector, u: Unitary, q_hi: int, q_lo: int) -> StateVector:
    """Apply a 4x4 unitary; q_hi supplies the more significant bit of the subspace"""
    if u.dim != 4:
        raise InputError(f"apply_2q needs a 4x4 unitary, got {u.dim}x{u.dim}")
    _check_pair(sv, q_hi, q_lo)

    state = sv.amps.reshape([2] * sv.n_qubits)
    gate = u.matrix.reshape(2, 2, 2, 2)
    state = np.tensordot(gate, state, axes=([2, 3], [q_hi, q_lo]))
    return StateVector(np.moveaxis(state, [0, 1], [q_hi, q_lo]).reshape(-1))
