"""Two-party teleportation: Alice holds qubits 0 and 1, Bob holds qubit 2"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from types import MappingProxyType
from typing import Any, Callable, Dict, List, Mapping, Optional, Tuple

from ..noise.models import NoiseConfig, flip_bits, perturb_unitary, sample_noisy_bell
from ..noise.rng import RngStream, StreamKey
from ..quantum.gates import CNOT, CORR11, H, I2, X, Z, Unitary, apply_1q, apply_2q, apply_cnot
from ..quantum.statevec import (
    StateVector,
    factor_measured,
    fidelity,
    ideal_bell,
    measure_qubits,
    project_qubits,
    tensor,
)
from .exceptions import InputError

logger = logging.getLogger(__name__)

ALICE_QUBITS = (0, 1)
OUTCOMES = ("00", "01", "10", "11")

# after the Hadamard: |00>(a|0> + b|1>) + |01>(a|1> + b|0>) + |10>(a|0> - b|1>) + |11>(a|1> - b|0>)
CORRECTIONS: Mapping[str, Unitary] = MappingProxyType({"00": I2, "01": X, "10": Z, "11": CORR11})
# X and Z swapped; fails on branches 01 and 10
MISLABELED_CORRECTIONS: Mapping[str, Unitary] = MappingProxyType({"00": I2, "01": Z, "10": X, "11": CORR11})

__all__ = [
    "Alice",
    "Bob",
    "ClassicalChannel",
    "ClassicalMessage",
    "CORRECTIONS",
    "MISLABELED_CORRECTIONS",
    "OUTCOMES",
    "StepStates",
    "TrialRecord",
    "correction_for",
    "ideal_bell",
    "ideal_step_states",
    "run_trial",
    "run_trial_all_branches",
]


@dataclass(frozen=True)
class ClassicalMessage:
    """Alice's two bits (qubit 0, then qubit 1)"""

    bits: str

    def __post_init__(self):
        if len(self.bits) != 2 or not set(self.bits) <= {"0", "1"}:
            raise InputError(f"a classical message carries exactly 2 bits, got {self.bits!r}")


@dataclass(frozen=True)
class StepStates:
    """Ideal three-qubit states after steps 1, 2 and 3"""

    entangled: StateVector
    after_xor: StateVector
    after_hadamard: StateVector


@dataclass(frozen=True)
class TrialRecord:
    """One protocol run"""

    input_a: complex
    input_b: complex
    outcome: str
    reported: str
    received: str
    correction_label: str
    bob_state: StateVector
    fidelity: float
    branch_probability: float

    def to_dict(self, number: Callable[[float], Any] = float) -> Dict[str, Any]:
        """Plain-data view; `number` formats every real"""

        def pair(z: complex) -> List[Any]:
            return [number(z.real), number(z.imag)]

        return {
            "input": {"a": pair(self.input_a), "b": pair(self.input_b)},
            "outcome": self.outcome,
            "reported": self.reported,
            "received": self.received,
            "correction": self.correction_label,
            "bob_state": [pair(complex(z)) for z in self.bob_state.amps],
            "fidelity": number(self.fidelity),
            "branch_probability": number(self.branch_probability),
        }


def correction_for(received: str, corrections: Mapping[str, Unitary] = CORRECTIONS) -> Unitary:
    """Bob's operator for the two bits he received"""
    ClassicalMessage(received)
    return corrections[received]


def ideal_step_states(phi: StateVector) -> StepStates:
    _check_input(phi)
    entangled = tensor(phi, ideal_bell())
    after_xor = apply_cnot(entangled, 0, 1)
    return StepStates(entangled, after_xor, apply_1q(after_xor, H, 0))


def _check_input(phi: StateVector) -> None:
    if phi.n_qubits != 1:
        raise InputError(f"the teleported state must be a single qubit, got {phi.n_qubits}")
    if not phi.is_normalized():
        raise InputError(f"the teleported state must be normalized, |phi|^2 = {phi.norm_squared:.12g}")


class Alice:
    """Sender: shares the pair, entangles, measures and reports"""

    def __init__(self, config: NoiseConfig):
        self.config = config
        self.sites = config.active_sites

    def share_pair(self, rng: RngStream) -> StateVector:
        eta = self.config.eta_bell if self.sites.bell else 0.0
        return sample_noisy_bell(eta, rng.child(StreamKey.BELL))

    def entangle(self, phi: StateVector, pair: StateVector, rng: RngStream) -> StateVector:
        """Steps 1-3: phi (x) pair, XOR on (0, 1), H on 0"""
        state = tensor(phi, pair)

        if self.sites.xor:
            xor = perturb_unitary(CNOT, self.config.sigma_gate, rng.child(StreamKey.XOR))
            state = apply_2q(state, xor, 0, 1)
        else:
            state = apply_cnot(state, 0, 1)

        hadamard = H
        if self.sites.hadamard:
            hadamard = perturb_unitary(H, self.config.sigma_gate, rng.child(StreamKey.HADAMARD))
        return apply_1q(state, hadamard, 0)

    def measure(self, state: StateVector, rng: RngStream):
        return measure_qubits(state, ALICE_QUBITS, rng.child(StreamKey.MEASURE))

    def report(self, outcome: str, rng: RngStream) -> ClassicalMessage:
        """Classical record of the outcome, possibly misreported"""
        if self.sites.readout:
            outcome = flip_bits(outcome, self.config.q_readout, rng.child(StreamKey.READOUT))
        return ClassicalMessage(outcome)


class ClassicalChannel:
    """Two-bit link from Alice to Bob"""

    def __init__(self, flip_probability: float = 0.0, enabled: bool = False):
        self.flip_probability = flip_probability
        self.enabled = enabled

    @classmethod
    def from_config(cls, config: NoiseConfig) -> ClassicalChannel:
        return cls(config.p_classical, config.active_sites.channel)

    def transmit(self, message: ClassicalMessage, rng: RngStream) -> ClassicalMessage:
        if not self.enabled:
            return message
        return ClassicalMessage(flip_bits(message.bits, self.flip_probability, rng.child(StreamKey.CHANNEL)))


class Bob:
    """Receiver: applies the correction selected by the received bits"""

    def __init__(self, config: NoiseConfig, corrections: Mapping[str, Unitary] = CORRECTIONS):
        self.config = config
        self.corrections = corrections
        self.perturbed = config.active_sites.correction

    def correct(self, qubit: StateVector, message: ClassicalMessage, rng: RngStream) -> Tuple[str, StateVector]:
        operator = correction_for(message.bits, self.corrections)
        label = operator.label
        if self.perturbed:
            operator = perturb_unitary(operator, self.config.sigma_gate, rng.child(StreamKey.CORRECTION))
        return label, apply_1q(qubit, operator, 0)


def _finish(
    phi: StateVector,
    collapsed: StateVector,
    outcome: str,
    probability: float,
    alice: Alice,
    channel: ClassicalChannel,
    bob: Bob,
    rng: RngStream,
) -> TrialRecord:
    """Steps 4-5 after the collapse: report, transmit, correct, score"""
    reported = alice.report(outcome, rng)
    received = channel.transmit(reported, rng)
    bob_qubit = factor_measured(collapsed, ALICE_QUBITS, outcome)
    label, bob_state = bob.correct(bob_qubit, received, rng)
    logger.debug(f"Outcome {outcome}, reported {reported.bits}, received {received.bits}, applied {label}")
    return TrialRecord(
        input_a=complex(phi.amps[0]),
        input_b=complex(phi.amps[1]),
        outcome=outcome,
        reported=reported.bits,
        received=received.bits,
        correction_label=label,
        bob_state=bob_state,
        fidelity=fidelity(phi, bob_state),
        branch_probability=probability,
    )


def run_trial(phi: StateVector, config: NoiseConfig, rng: RngStream) -> TrialRecord:
    """Teleport `phi` once, sampling Alice's measurement"""
    _check_input(phi)
    alice = Alice(config)
    state = alice.entangle(phi, alice.share_pair(rng), rng)
    measurement = alice.measure(state, rng)
    return _finish(
        phi,
        measurement.collapsed,
        measurement.outcome,
        measurement.probability,
        alice,
        ClassicalChannel.from_config(config),
        Bob(config),
        rng,
    )


def run_trial_all_branches(
    phi: StateVector,
    config: NoiseConfig,
    rng: RngStream,
    corrections: Optional[Mapping[str, Unitary]] = None,
) -> List[TrialRecord]:
    """
    Teleport `phi` once per measurement outcome, projecting instead of sampling.

    Every branch sees the same noise draws (pair, gates, bit-flip masks,
    correction perturbation), so branches can be compared pairwise.
    """
    _check_input(phi)
    alice = Alice(config)
    channel = ClassicalChannel.from_config(config)
    bob = Bob(config, corrections if corrections is not None else CORRECTIONS)
    state = alice.entangle(phi, alice.share_pair(rng), rng)

    records = []
    for outcome in OUTCOMES:
        collapsed, probability = project_qubits(state, ALICE_QUBITS, outcome)
        records.append(_finish(phi, collapsed, outcome, probability, alice, channel, bob, rng))
    return records
