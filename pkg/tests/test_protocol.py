import numpy as np
import pytest

from src.core.exceptions import InputError
from src.core.protocol import (
    CORRECTIONS,
    MISLABELED_CORRECTIONS,
    OUTCOMES,
    Alice,
    Bob,
    ClassicalChannel,
    ClassicalMessage,
    correction_for,
    ideal_step_states,
    run_trial,
    run_trial_all_branches,
)
from src.noise.models import NoiseConfig, SiteFlags, haar_random_qubit
from src.noise.rng import RngStream, StreamKey
from src.quantum.gates import CORR11, I2, X, Z
from src.quantum.statevec import StateVector, basis_state, qubit_state


class TestStepStates:
    def test_after_entangling(self, symbolic_input):
        a, b, phi = symbolic_input
        # a|000> + b|100> + a|011> + b|111>
        expected = np.array([a, 0, 0, a, b, 0, 0, b]) / np.sqrt(2)
        np.testing.assert_allclose(ideal_step_states(phi).entangled.amps, expected, atol=1e-12)

    def test_after_xor(self, symbolic_input):
        a, b, phi = symbolic_input
        # a|000> + a|011> + b|110> + b|101>
        expected = np.array([a, 0, 0, a, 0, b, b, 0]) / np.sqrt(2)
        np.testing.assert_allclose(ideal_step_states(phi).after_xor.amps, expected, atol=1e-12)

    def test_after_hadamard(self, symbolic_input):
        a, b, phi = symbolic_input
        expected = np.array([a, b, b, a, a, -b, -b, a]) / 2
        np.testing.assert_allclose(ideal_step_states(phi).after_hadamard.amps, expected, atol=1e-12)


class TestCorrections:
    def test_derived_table(self):
        assert correction_for("00") is I2
        assert correction_for("01") is X
        assert correction_for("10") is Z
        assert correction_for("11") is CORR11

    def test_rejects_bad_message(self):
        with pytest.raises(InputError):
            correction_for("012")
        with pytest.raises(InputError):
            ClassicalMessage("2")

    def test_mislabeled_table_fails_on_swapped_branches(self, ideal_config):
        records = run_trial_all_branches(qubit_state(0.6, 0.8), ideal_config, RngStream(1), MISLABELED_CORRECTIONS)
        by_outcome = {record.outcome: record.fidelity for record in records}
        assert by_outcome["01"] < 0.999
        assert by_outcome["10"] < 0.999
        assert by_outcome["00"] == pytest.approx(1.0, abs=1e-10)
        assert by_outcome["11"] == pytest.approx(1.0, abs=1e-10)

    def test_derived_table_recovers_every_branch(self, ideal_config):
        records = run_trial_all_branches(qubit_state(0.6, 0.8), ideal_config, RngStream(1), CORRECTIONS)
        assert [record.outcome for record in records] == list(OUTCOMES)
        assert all(record.fidelity >= 1 - 1e-10 for record in records)


def test_ideal_round_trip_over_haar_inputs(ideal_config):
    master = RngStream(2024)
    for i in range(1000):
        trial = master.child(i)
        phi = haar_random_qubit(trial.child(StreamKey.INPUT))
        for record in run_trial_all_branches(phi, ideal_config, trial):
            assert record.fidelity >= 1 - 1e-10
            assert abs(record.branch_probability - 0.25) <= 1e-12
            assert record.reported == record.received == record.outcome


def test_run_trial_record(ideal_config):
    phi = qubit_state(0.6, 0.8j)
    record = run_trial(phi, ideal_config, RngStream(11))
    assert record.outcome in OUTCOMES
    assert record.fidelity >= 1 - 1e-10
    assert record.correction_label == CORRECTIONS[record.outcome].label
    assert record.input_a == pytest.approx(0.6)
    assert record.input_b == pytest.approx(0.8j)

    data = record.to_dict()
    assert data["input"] == {"a": [pytest.approx(0.6), 0.0], "b": [0.0, pytest.approx(0.8)]}
    assert len(data["bob_state"]) == 2


def test_run_trial_is_reproducible():
    config = NoiseConfig(eta_bell=0.2, sigma_gate=0.1, p_classical=0.1, q_readout=0.1, seed=1)
    phi = qubit_state(0.6, 0.8)
    first = run_trial(phi, config, RngStream(77).child(4))
    second = run_trial(phi, config, RngStream(77).child(4))
    assert first == second


def test_run_trial_rejects_bad_input(ideal_config):
    with pytest.raises(InputError):
        run_trial(basis_state(2, "00"), ideal_config, RngStream(1))
    with pytest.raises(InputError):
        run_trial(StateVector(np.array([1.0, 1.0])), ideal_config, RngStream(1))


def test_readout_flip_changes_the_report_but_not_the_collapse():
    config = NoiseConfig(q_readout=1.0, seed=0)
    record = run_trial(qubit_state(1, 0), config, RngStream(3))
    flipped = "".join("1" if bit == "0" else "0" for bit in record.outcome)
    assert record.reported == flipped
    assert record.received == flipped


def test_channel_flips_bits_in_transit(rng):
    channel = ClassicalChannel(flip_probability=1.0, enabled=True)
    assert channel.transmit(ClassicalMessage("01"), rng).bits == "10"
    assert ClassicalChannel(1.0, enabled=False).transmit(ClassicalMessage("01"), rng).bits == "01"


def test_disabled_site_ignores_its_magnitude():
    config = NoiseConfig(p_classical=1.0, q_readout=1.0, seed=0, sites=SiteFlags.none())
    record = run_trial(qubit_state(0.6, 0.8), config, RngStream(3))
    assert record.fidelity >= 1 - 1e-10


def test_branches_share_noise_draws():
    config = NoiseConfig(eta_bell=0.3, sigma_gate=0.2, seed=0)
    phi = qubit_state(0.6, 0.8)
    first = run_trial_all_branches(phi, config, RngStream(5))
    second = run_trial_all_branches(phi, config, RngStream(5))
    assert [r.fidelity for r in first] == [r.fidelity for r in second]
    assert sum(r.branch_probability for r in first) == pytest.approx(1.0)


def test_alice_and_bob_compose_to_run_trial():
    config = NoiseConfig(sigma_gate=0.05, seed=0)
    phi = qubit_state(0.6, 0.8)
    rng = RngStream(9)
    alice = Alice(config)
    state = alice.entangle(phi, alice.share_pair(rng), rng)
    measurement = alice.measure(state, rng)
    assert measurement.outcome == run_trial(phi, config, RngStream(9)).outcome
    label, _ = Bob(config).correct(qubit_state(1, 0), ClassicalMessage("01"), rng)
    assert label == "X"


def test_all_sites_off_ignores_every_magnitude(haar_inputs):
    loud = NoiseConfig(eta_bell=5.0, sigma_gate=3.0, p_classical=1.0, q_readout=1.0, seed=0, sites=SiteFlags.none())
    for i, phi in enumerate(haar_inputs):
        assert run_trial(phi, loud, RngStream(8).child(i)) == run_trial(phi, NoiseConfig.ideal(), RngStream(8).child(i))


def test_negated_corr11_changes_no_fidelity(haar_inputs):
    negated = {**CORRECTIONS, "11": -CORR11}
    config = NoiseConfig(eta_bell=0.1, sigma_gate=0.1, seed=0)
    for i, phi in enumerate(haar_inputs):
        derived = run_trial_all_branches(phi, config, RngStream(4).child(i))
        flipped = run_trial_all_branches(phi, config, RngStream(4).child(i), negated)
        for left, right in zip(derived, flipped):
            assert abs(left.fidelity - right.fidelity) <= 1e-12


def test_huge_gate_noise_still_scores():
    record = run_trial(qubit_state(0.6, 0.8), NoiseConfig(sigma_gate=1e200, seed=1), RngStream(1))
    assert 0.0 <= record.fidelity <= 1.0 + 1e-12
    assert np.all(np.isfinite(record.bob_state.amps))
