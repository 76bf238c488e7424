"""Error models for the Bell pair, the gates, Alice's readout and the classical channel"""

from __future__ import annotations

from functools import cached_property
from typing import Dict, Literal, Optional, Tuple, get_args

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from ..core.exceptions import InputError
from ..quantum.gates import Unitary
from ..quantum.statevec import StateVector, ideal_bell, normalize
from .rng import SEED_LIMIT, RngStream

NoiseParameter = Literal["eta_bell", "sigma_gate", "p_classical", "q_readout"]
NOISE_PARAMETERS: Tuple[str, ...] = get_args(NoiseParameter)

SITES: Tuple[str, ...] = ("bell", "xor", "hadamard", "correction", "channel", "readout")

# magnitude that drives each site when site flags are left implicit
SITE_MAGNITUDES: Dict[str, str] = {
    "bell": "eta_bell",
    "xor": "sigma_gate",
    "hadamard": "sigma_gate",
    "correction": "sigma_gate",
    "channel": "p_classical",
    "readout": "q_readout",
}


class SiteFlags(BaseModel):
    """Independent on/off switches for every noise-injection site"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    bell: bool = Field(default=False, description="Perturb the shared Bell pair")
    xor: bool = Field(default=False, description="Perturb Alice's XOR (CNOT) gate")
    hadamard: bool = Field(default=False, description="Perturb Alice's Hadamard gate")
    correction: bool = Field(default=False, description="Perturb Bob's correction operator")
    channel: bool = Field(default=False, description="Flip bits on the classical channel")
    readout: bool = Field(default=False, description="Misreport Alice's measurement bits")

    @classmethod
    def none(cls) -> SiteFlags:
        return cls()

    @classmethod
    def only(cls, *sites: str) -> SiteFlags:
        unknown = set(sites) - set(SITES)
        if unknown:
            raise InputError(f"unknown noise sites: {sorted(unknown)}")
        return cls(**{site: True for site in sites})

    @property
    def enabled(self) -> Tuple[str, ...]:
        return tuple(site for site in SITES if getattr(self, site))


class NoiseConfig(BaseModel):
    """Error magnitudes, master seed and site switches for one experiment"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    eta_bell: float = Field(default=0.0, ge=0, allow_inf_nan=False, description="Bell-state perturbation magnitude")
    sigma_gate: float = Field(default=0.0, ge=0, allow_inf_nan=False, description="Gate imprecision scale in radians")
    p_classical: float = Field(default=0.0, ge=0, le=1, description="Per-bit flip probability on the classical channel")
    q_readout: float = Field(default=0.0, ge=0, le=1, description="Per-bit misreport probability at Alice's measurement")
    seed: int = Field(default=0, ge=0, lt=SEED_LIMIT, description="Master seed")
    sites: Optional[SiteFlags] = Field(
        default=None,
        description="Explicit site switches; when omitted a site is on iff its magnitude is non-zero",
    )

    @cached_property
    def active_sites(self) -> SiteFlags:
        if self.sites is not None:
            return self.sites
        return SiteFlags(**{site: getattr(self, magnitude) > 0 for site, magnitude in SITE_MAGNITUDES.items()})

    @classmethod
    def ideal(cls, seed: int = 0) -> NoiseConfig:
        """Every site switched off"""
        return cls(seed=seed, sites=SiteFlags.none())

    def with_parameter(self, name: str, value: float) -> NoiseConfig:
        """Copy with one magnitude replaced, range-checked"""
        if name not in NOISE_PARAMETERS:
            raise InputError(f"unknown noise parameter {name!r}; expected one of {list(NOISE_PARAMETERS)}")
        try:
            return NoiseConfig.model_validate({**self.model_dump(exclude_unset=True), name: value})
        except ValidationError as exc:
            raise InputError(f"{name}={value!r} is out of range: {exc.errors()[0]['msg']}") from exc


def sample_noisy_bell(eta: float, rng: RngStream) -> StateVector:
    """normalize((|00> + |11>)/sqrt(2) + eta * g), g a 4-vector of complex Gaussians"""
    if not np.isfinite(eta) or eta < 0:
        raise InputError(f"eta must be finite and >= 0, got {eta}")
    bell = ideal_bell()
    if eta == 0:
        return bell
    return normalize(bell.amps + eta * rng.complex_normal(4))


def _perturb_qubit_gate(u: Unitary, sigma: float, rng: RngStream) -> Unitary:
    # exp(-i eps.sigma) = cos|eps| I - i sin|eps| (eps_hat . sigma), eps = sigma * z
    z = rng.standard_normal(3)
    norm = float(np.linalg.norm(z))
    if norm == 0.0:
        return u
    nx, ny, nz = z / norm
    # scale only the angle so a huge sigma cannot overflow the direction
    angle = sigma * norm
    generator = np.array([[nz, nx - 1j * ny], [nx + 1j * ny, -nz]])
    rotation = np.cos(angle) * np.eye(2) - 1j * np.sin(angle) * generator
    return Unitary(rotation @ u.matrix, label=f"{u.label}~")


def _perturb_two_qubit_gate(u: Unitary, sigma: float, rng: RngStream) -> Unitary:
    g = rng.complex_normal((4, 4))
    # E = sigma * (G + G^dagger) / 2; diagonalise before scaling
    eigenvalues, eigenvectors = np.linalg.eigh((g + g.conj().T) / 2)
    rotation = (eigenvectors * np.exp(-1j * sigma * eigenvalues)) @ eigenvectors.conj().T
    return Unitary(rotation @ u.matrix, label=f"{u.label}~")


def perturb_unitary(u: Unitary, sigma: float, rng: RngStream) -> Unitary:
    """exp(-iE) u with E a random Hermitian generator of scale sigma"""
    if not np.isfinite(sigma) or sigma < 0:
        raise InputError(f"sigma must be finite and >= 0, got {sigma}")
    if sigma == 0:
        return u
    if u.dim == 2:
        return _perturb_qubit_gate(u, sigma, rng)
    return _perturb_two_qubit_gate(u, sigma, rng)


def flip_bits(bits: str, p: float, rng: RngStream) -> str:
    """Flip each bit independently with probability p"""
    if not 0 <= p <= 1:
        raise InputError(f"flip probability must be in [0, 1], got {p}")
    if not set(bits) <= {"0", "1"}:
        raise InputError(f"expected a bit-string, got {bits!r}")
    flips = rng.uniforms(len(bits)) < p
    return "".join(str(int(bit) ^ int(flip)) for bit, flip in zip(bits, flips))


def haar_random_qubit(rng: RngStream) -> StateVector:
    """a = cos(theta/2), b = e^{i phi} sin(theta/2), cos(theta) ~ U[-1, 1], phi ~ U[0, 2pi)"""
    u_theta, u_phi = rng.uniforms(2)
    theta = np.arccos(1.0 - 2.0 * u_theta)
    phi = 2.0 * np.pi * u_phi
    return StateVector(np.array([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)]))
