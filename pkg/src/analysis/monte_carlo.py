# Monte Carlo fidelity estimation and parameter sweeps

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterator, List, Sequence, Tuple

import numpy as np

from ..core.exceptions import InputError
from ..core.protocol import OUTCOMES, run_trial
from ..noise.models import NOISE_PARAMETERS, NoiseConfig, haar_random_qubit
from ..noise.rng import RngStream, StreamKey, derive_seed

logger = logging.getLogger(__name__)

Histogram = Tuple[int, int, int, int]

_PROGRESS_EVERY = 10_000


def mean_and_stderr(samples: np.ndarray) -> Tuple[float, float]:
    """Sample mean and sample-std / sqrt(n); stderr is 0 for a single sample"""
    samples = np.asarray(samples, dtype=float)
    mean = float(np.mean(samples))
    if samples.size < 2:
        return mean, 0.0
    return mean, float(np.std(samples, ddof=1) / np.sqrt(samples.size))


@dataclass(frozen=True)
class FidelityEstimate:
    mean: float
    stderr: float
    trials: int
    outcome_histogram: Histogram = (0, 0, 0, 0)

    def __iter__(self) -> Iterator[float]:
        # unpacks as (mean, stderr)
        yield self.mean
        yield self.stderr


def estimate_mean_fidelity(config: NoiseConfig, n_trials: int, seed: int) -> FidelityEstimate:
    """Mean and standard error of teleportation fidelity over Haar-random inputs"""
    if n_trials < 1:
        raise InputError(f"n_trials must be >= 1, got {n_trials}")

    master = RngStream(seed)
    fidelities = np.empty(n_trials)
    histogram = dict.fromkeys(OUTCOMES, 0)

    for i in range(n_trials):
        trial = master.child(i)
        phi = haar_random_qubit(trial.child(StreamKey.INPUT))
        record = run_trial(phi, config, trial)
        fidelities[i] = record.fidelity
        histogram[record.outcome] += 1
        if (i + 1) % _PROGRESS_EVERY == 0:
            logger.info(f"{i + 1}/{n_trials} trials done")

    mean, stderr = mean_and_stderr(fidelities)
    logger.info(f"Mean fidelity {mean:.6f} +/- {stderr:.2e} over {n_trials} trials (seed {seed})")
    return FidelityEstimate(mean, stderr, n_trials, tuple(histogram[o] for o in OUTCOMES))


@dataclass(frozen=True)
class SweepSpec:
    """One noise magnitude varied over `values`, everything else from `base_config`"""

    parameter: str
    values: Sequence[float]
    trials_per_point: int
    base_config: NoiseConfig = field(default_factory=NoiseConfig)

    def __post_init__(self):
        if self.parameter not in NOISE_PARAMETERS:
            raise InputError(f"unknown sweep parameter {self.parameter!r}; expected one of {list(NOISE_PARAMETERS)}")
        if len(self.values) == 0:
            raise InputError("a sweep needs at least one value")
        if self.trials_per_point < 1:
            raise InputError(f"trials_per_point must be >= 1, got {self.trials_per_point}")
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        for value in self.values:
            self.config_at(value)

    def config_at(self, value: float) -> NoiseConfig:
        return self.base_config.with_parameter(self.parameter, value)


@dataclass(frozen=True)
class SweepPoint:
    parameter: str
    value: float
    mean_fidelity: float
    stderr: float
    outcome_histogram: Histogram
    trials: int


@dataclass(frozen=True)
class SweepResult:
    parameter: str
    points: Tuple[SweepPoint, ...]

    @property
    def means(self) -> List[float]:
        return [point.mean_fidelity for point in self.points]


def sweep(spec: SweepSpec) -> SweepResult:
    """One fidelity estimate per value; point k is seeded with derive_seed(base seed, k)"""
    points = []
    for index, value in enumerate(spec.values):
        logger.info(f"Sweep {spec.parameter}={value} ({index + 1}/{len(spec.values)})")
        estimate = estimate_mean_fidelity(
            spec.config_at(value),
            spec.trials_per_point,
            derive_seed(spec.base_config.seed, index),
        )
        points.append(
            SweepPoint(
                parameter=spec.parameter,
                value=value,
                mean_fidelity=estimate.mean,
                stderr=estimate.stderr,
                outcome_histogram=estimate.outcome_histogram,
                trials=estimate.trials,
            )
        )
    return SweepResult(spec.parameter, tuple(points))
