# Error hierarchy for teleport-lab
from typing import Optional


class TeleportLabError(Exception):
    """Base class for every error raised by the simulator"""


class InputError(TeleportLabError, ValueError):
    """Caller supplied an out-of-range or inconsistent argument"""


class ConfigError(InputError):
    """Experiment configuration failed validation"""

    def __init__(self, message: str, key: Optional[str] = None):
        super().__init__(message)
        self.key = key


class DegenerateStateError(TeleportLabError, ArithmeticError):
    """A vector was too close to zero to be normalized"""


class NumericalDegeneracyError(DegenerateStateError):
    """Every measurement outcome had vanishing Born weight"""


class ContractError(TeleportLabError, RuntimeError):
    """An internal precondition or invariant was violated"""
