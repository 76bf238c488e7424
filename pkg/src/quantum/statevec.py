"""
Immutable dense state vectors for 1 to 12 qubits.

Qubit 0 is the most significant bit of the basis index: |100> is index 4.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import TYPE_CHECKING, NamedTuple, Sequence, Tuple, Union

import numpy as np
import numpy.typing as npt

from ..core.exceptions import (
    ContractError,
    DegenerateStateError,
    InputError,
    NumericalDegeneracyError,
)

if TYPE_CHECKING:
    from ..noise.rng import RngStream

MAX_QUBITS = 12
NORM_TOLERANCE = 1e-9
DEGENERATE_NORM = 1e-12

_INV_SQRT2 = 1 / np.sqrt(2)


@dataclass(frozen=True, eq=False)
class StateVector:
    """
    Complex amplitude vector over n qubits.

    The constructor accepts raw amplitudes (so that they can be handed to
    normalize); every operation in this module returns normalized vectors.
    """

    amps: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amps, dtype=np.complex128)
        if amps.ndim != 1:
            raise InputError(f"amplitudes must be one-dimensional, got shape {amps.shape}")
        n_qubits = amps.size.bit_length() - 1
        if amps.size < 2 or 1 << n_qubits != amps.size:
            raise InputError(f"amplitude count must be a power of two >= 2, got {amps.size}")
        if n_qubits > MAX_QUBITS:
            raise InputError(f"at most {MAX_QUBITS} qubits are supported, got {n_qubits}")
        if not np.all(np.isfinite(amps)):
            raise InputError("amplitudes must be finite")
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)

    @property
    def n_qubits(self) -> int:
        return self.amps.size.bit_length() - 1

    @property
    def probabilities(self) -> np.ndarray:
        """Born weights |amp|^2 per basis state"""
        return np.abs(self.amps) ** 2

    @property
    def norm_squared(self) -> float:
        return float(np.sum(self.probabilities))

    def is_normalized(self, tolerance: float = NORM_TOLERANCE) -> bool:
        return abs(self.norm_squared - 1.0) <= tolerance

    def amplitude(self, label: str) -> complex:
        """Amplitude of the basis state written as a bit-string, e.g. '101'"""
        return complex(self.amps[_label_index(self.n_qubits, label)])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StateVector):
            return NotImplemented
        return np.array_equal(self.amps, other.amps)

    __hash__ = None

    def __repr__(self) -> str:
        return f"StateVector(n_qubits={self.n_qubits}, amps={np.array2string(self.amps, precision=6)})"


class Measurement(NamedTuple):
    outcome: str
    collapsed: StateVector
    probability: float


def _check_qubit_count(n_qubits: int) -> None:
    if not 1 <= n_qubits <= MAX_QUBITS:
        raise InputError(f"n_qubits must be in [1, {MAX_QUBITS}], got {n_qubits}")


def _label_index(n_qubits: int, label: str) -> int:
    if len(label) != n_qubits or any(ch not in "01" for ch in label):
        raise InputError(f"label must be a {n_qubits}-character bit-string, got {label!r}")
    return int(label, 2)


def _check_targets(n_qubits: int, targets: Sequence[int]) -> Tuple[int, ...]:
    targets = tuple(int(t) for t in targets)
    if not targets:
        raise InputError("at least one target qubit is required")
    if len(set(targets)) != len(targets):
        raise InputError(f"target qubits must be distinct, got {targets}")
    for t in targets:
        if not 0 <= t < n_qubits:
            raise InputError(f"qubit index {t} out of range for {n_qubits} qubits")
    return targets


@lru_cache(maxsize=64)
def _target_bits(n_qubits: int, targets: Tuple[int, ...]) -> np.ndarray:
    """Bit value of each target qubit for every basis index, shape (k, 2^n)"""
    index = np.arange(1 << n_qubits)
    bits = np.stack([(index >> (n_qubits - 1 - t)) & 1 for t in targets])
    bits.setflags(write=False)
    return bits


@lru_cache(maxsize=64)
def _outcome_index(n_qubits: int, targets: Tuple[int, ...]) -> np.ndarray:
    """Index of the measured outcome (targets read MSB first) for every basis index"""
    bits = _target_bits(n_qubits, targets)
    weights = 1 << np.arange(len(targets) - 1, -1, -1)
    index = weights @ bits
    index.setflags(write=False)
    return index


def basis_state(n_qubits: int, label: str) -> StateVector:
    """Computational basis state |label>"""
    _check_qubit_count(n_qubits)
    amps = np.zeros(1 << n_qubits, dtype=np.complex128)
    amps[_label_index(n_qubits, label)] = 1.0
    return StateVector(amps)


def qubit_state(a: complex, b: complex) -> StateVector:
    """Single-qubit state a|0> + b|1>, normalized"""
    return normalize(StateVector(np.array([a, b], dtype=np.complex128)))


def ideal_bell() -> StateVector:
    """The shared resource (|00> + |11>)/sqrt(2)"""
    return StateVector(np.array([_INV_SQRT2, 0, 0, _INV_SQRT2], dtype=np.complex128))


def tensor(left: StateVector, right: StateVector) -> StateVector:
    """left (x) right, with left's qubits first"""
    if left.n_qubits + right.n_qubits > MAX_QUBITS:
        raise InputError(
            f"tensor product of {left.n_qubits} and {right.n_qubits} qubits exceeds {MAX_QUBITS}"
        )
    return StateVector(np.kron(left.amps, right.amps))


def normalize(sv: Union[StateVector, npt.ArrayLike]) -> StateVector:
    if not isinstance(sv, StateVector):
        sv = StateVector(sv)
    norm = np.sqrt(sv.norm_squared)
    if norm <= DEGENERATE_NORM:
        raise DegenerateStateError(f"cannot normalize a vector of norm {norm:.3e}")
    return StateVector(sv.amps / norm)


def inner_product(u: StateVector, v: StateVector) -> complex:
    """<u|v> = sum conj(u_i) v_i"""
    if u.n_qubits != v.n_qubits:
        raise InputError(f"dimension mismatch: {u.n_qubits} vs {v.n_qubits} qubits")
    return complex(np.vdot(u.amps, v.amps))


def fidelity(u: StateVector, v: StateVector) -> float:
    """|<u|v>|^2, clipped to [0, 1]"""
    overlap = inner_product(u, v)
    return float(min(1.0, overlap.real**2 + overlap.imag**2))


def project_qubits(sv: StateVector, targets: Sequence[int], outcome: str) -> Tuple[StateVector, float]:
    """
    Project onto `outcome` on `targets` and renormalize.

    Returns the collapsed state and the Born weight of the outcome.
    """
    targets = _check_targets(sv.n_qubits, targets)
    if len(outcome) != len(targets) or not set(outcome) <= {"0", "1"}:
        raise InputError(f"outcome must be a {len(targets)}-character bit-string, got {outcome!r}")

    wanted = np.array([int(ch) for ch in outcome])
    consistent = np.all(_target_bits(sv.n_qubits, targets) == wanted[:, None], axis=0)
    kept = np.where(consistent, sv.amps, 0)
    weight = float(np.sum(np.abs(kept) ** 2))
    if weight < DEGENERATE_NORM:
        raise NumericalDegeneracyError(f"outcome {outcome} on qubits {list(targets)} has weight {weight:.3e}")
    return StateVector(kept / np.sqrt(weight)), weight / sv.norm_squared


def measure_qubits(sv: StateVector, targets: Sequence[int], rng: "RngStream") -> Measurement:
    """Projective Z-basis measurement of `targets`, outcome drawn by the Born rule"""
    targets = _check_targets(sv.n_qubits, targets)
    weights = np.bincount(
        _outcome_index(sv.n_qubits, targets),
        weights=sv.probabilities,
        minlength=1 << len(targets),
    )
    total = float(weights.sum())
    if total < DEGENERATE_NORM:
        raise NumericalDegeneracyError(f"every outcome on qubits {list(targets)} is below {DEGENERATE_NORM}")

    # inverse-CDF draw; the scaled uniform never lands on a zero-weight tail
    cumulative = np.cumsum(weights)
    drawn = int(np.searchsorted(cumulative, rng.uniform() * total, side="right"))
    drawn = min(drawn, int(np.flatnonzero(weights)[-1]))
    outcome = format(drawn, f"0{len(targets)}b")

    collapsed, _ = project_qubits(sv, targets, outcome)
    return Measurement(outcome, collapsed, float(weights[drawn]) / total)


def factor_measured(sv: StateVector, measured: Sequence[int], outcome: str) -> StateVector:
    """
    State of the qubits that were not measured, given a collapsed `sv`.

    Raises ContractError when `sv` still carries amplitude on basis states
    that disagree with `outcome`.
    """
    measured = _check_targets(sv.n_qubits, measured)
    if len(measured) >= sv.n_qubits:
        raise InputError("at least one qubit must remain after factoring")
    if len(outcome) != len(measured) or not set(outcome) <= {"0", "1"}:
        raise InputError(f"outcome must be a {len(measured)}-character bit-string, got {outcome!r}")

    wanted = np.array([int(ch) for ch in outcome])
    consistent = np.all(_target_bits(sv.n_qubits, measured) == wanted[:, None], axis=0)
    stray = float(np.max(np.abs(sv.amps[~consistent]), initial=0.0))
    if stray > NORM_TOLERANCE:
        raise ContractError(f"state is not collapsed onto {outcome}: stray amplitude {stray:.3e}")

    # consistent indices ascend in the order of the remaining qubits
    return normalize(sv.amps[consistent])
