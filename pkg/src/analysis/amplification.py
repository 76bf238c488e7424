"""Single-site vs all-site infidelity at a common error scale, on one shared seed"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Tuple

from ..core.exceptions import InputError
from ..noise.models import NoiseConfig, SiteFlags
from .monte_carlo import estimate_mean_fidelity

logger = logging.getLogger(__name__)

AMPLIFIED_SITES: Tuple[str, ...] = ("bell", "xor", "hadamard", "correction")
COMBINED_LABEL = "all"


@dataclass(frozen=True)
class SiteInfidelity:
    label: str
    mean_infidelity: float
    stderr: float
    trials: int


def _ratio(numerator: float, denominator: float) -> float:
    return numerator / denominator if denominator > 0 else math.nan


@dataclass(frozen=True)
class AmplificationReport:
    sigma: float
    seed: int
    singles: Tuple[SiteInfidelity, ...]
    combined: SiteInfidelity

    @property
    def rows(self) -> Tuple[SiteInfidelity, ...]:
        return self.singles + (self.combined,)

    @property
    def max_single(self) -> SiteInfidelity:
        return max(self.singles, key=lambda row: row.mean_infidelity)

    @property
    def additive_prediction(self) -> float:
        """Combined infidelity if site errors simply added up"""
        return sum(row.mean_infidelity for row in self.singles)

    @property
    def ratio_to_max_single(self) -> float:
        return _ratio(self.combined.mean_infidelity, self.max_single.mean_infidelity)

    @property
    def ratio_to_additive(self) -> float:
        return _ratio(self.combined.mean_infidelity, self.additive_prediction)

    def ratios(self) -> Dict[str, float]:
        """Each row's infidelity relative to the worst single site"""
        worst = self.max_single.mean_infidelity
        return {row.label: _ratio(row.mean_infidelity, worst) for row in self.rows}


def site_config(sites: Tuple[str, ...], sigma: float, seed: int) -> NoiseConfig:
    gate_sites = {"xor", "hadamard", "correction"}
    return NoiseConfig(
        eta_bell=sigma if "bell" in sites else 0.0,
        sigma_gate=sigma if gate_sites & set(sites) else 0.0,
        seed=seed,
        sites=SiteFlags.only(*sites),
    )


def _measure(label: str, sites: Tuple[str, ...], sigma: float, trials: int, seed: int) -> SiteInfidelity:
    estimate = estimate_mean_fidelity(site_config(sites, sigma, seed), trials, seed)
    row = SiteInfidelity(label, 1.0 - estimate.mean, estimate.stderr, trials)
    logger.info(f"Infidelity with {label} at sigma={sigma}: {row.mean_infidelity:.3e} +/- {row.stderr:.1e}")
    return row


def amplification_experiment(sigma: float, trials: int, seed: int) -> AmplificationReport:
    if not math.isfinite(sigma) or sigma <= 0:
        raise InputError(f"sigma must be finite and > 0, got {sigma}")
    if trials < 1:
        raise InputError(f"trials must be >= 1, got {trials}")

    singles: List[SiteInfidelity] = [_measure(site, (site,), sigma, trials, seed) for site in AMPLIFIED_SITES]
    combined = _measure(COMBINED_LABEL, AMPLIFIED_SITES, sigma, trials, seed)
    report = AmplificationReport(sigma, seed, tuple(singles), combined)
    logger.info(
        f"All-site / max single-site infidelity = {report.ratio_to_max_single:.3f}, "
        f"all-site / additive prediction = {report.ratio_to_additive:.3f}"
    )
    return report
