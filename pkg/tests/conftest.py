import numpy as np
import pytest
from hypothesis import strategies as st

from src.config.settings import LabSettings
from src.noise.models import NoiseConfig, haar_random_qubit
from src.noise.rng import RngStream
from src.quantum.statevec import StateVector, qubit_state

SQRT_HALF = 1 / np.sqrt(2)

# (a, b) inputs with hand-checkable step states
SYMBOLIC_INPUTS = [(1.0, 0.0), (0.0, 1.0), (SQRT_HALF, SQRT_HALF), (0.6, 0.8)]


@st.composite
def states(draw, n_qubits=1):
    """Normalized n-qubit states with amplitudes bounded away from degenerate norms"""
    size = 1 << n_qubits
    parts = draw(
        st.lists(
            st.floats(min_value=-1.0, max_value=1.0, allow_nan=False, allow_infinity=False),
            min_size=2 * size,
            max_size=2 * size,
        )
    )
    amps = np.array(parts[:size]) + 1j * np.array(parts[size:])
    if np.linalg.norm(amps) < 1e-3:
        amps[0] += 1.0
    return StateVector(amps / np.linalg.norm(amps))


@pytest.fixture
def rng():
    return RngStream(20240101)


@pytest.fixture
def ideal_config():
    return NoiseConfig.ideal(seed=5)


@pytest.fixture
def settings():
    return LabSettings(log_level="WARNING", log_file=None, default_trials=200, float_digits=12)


@pytest.fixture
def haar_inputs():
    master = RngStream(99)
    return [haar_random_qubit(master.child(i)) for i in range(50)]


@pytest.fixture(params=SYMBOLIC_INPUTS, ids=["zero", "one", "plus", "0.6-0.8"])
def symbolic_input(request):
    a, b = request.param
    return a, b, qubit_state(a, b)
