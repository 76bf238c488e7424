"""Experiment configuration: JSON document plus command-line overrides"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from ..analysis.monte_carlo import SweepSpec
from ..core.exceptions import ConfigError, InputError
from ..noise.models import NoiseConfig, NoiseParameter
from ..quantum.statevec import StateVector, qubit_state
from .settings import LabSettings, load_config

logger = logging.getLogger(__name__)

Command = Literal["run", "estimate", "sweep", "amplify", "certify"]
OutputFormat = Literal["csv", "json"]

# short flag name -> dotted config key
FLAG_KEYS: Dict[str, str] = {
    "command": "command",
    "seed": "noise.seed",
    "trials": "trials",
    "param": "sweep.parameter",
    "values": "sweep.values",
    "out": "output_path",
    "format": "output_format",
}

DEFAULT_FORMATS: Dict[str, str] = {
    "run": "json",
    "estimate": "json",
    "sweep": "csv",
    "amplify": "csv",
    "certify": "csv",
}


class InputStateSpec(BaseModel):
    """Explicit input for the run command, amplitudes as [re, im]"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    a: Tuple[float, float] = Field(default=(1.0, 0.0), description="Amplitude of |0>")
    b: Tuple[float, float] = Field(default=(0.0, 0.0), description="Amplitude of |1>")

    @model_validator(mode="after")
    def _not_zero(self):
        if sum(x * x for x in self.a + self.b) <= 1e-24:
            raise ValueError("input state must not be the zero vector")
        return self

    def to_state(self) -> StateVector:
        return qubit_state(complex(*self.a), complex(*self.b))


class SweepParams(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    parameter: NoiseParameter = Field(description="Noise magnitude to vary")
    values: List[float] = Field(min_length=1, description="Values of the swept magnitude")


class AmplifyParams(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    sigma: float = Field(default=0.1, gt=0, allow_inf_nan=False, description="Common error scale of every site")


class CertifyParams(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    eta: Optional[float] = Field(default=None, ge=0, allow_inf_nan=False, description="Source perturbation; defaults to noise.eta_bell")
    n_pairs: Optional[int] = Field(default=None, ge=2, description="Pairs sacrificed; defaults to trials")


class RunConfig(BaseModel):
    """Validated experiment description"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    command: Command = Field(description="Experiment to run")
    noise: NoiseConfig = Field(default_factory=NoiseConfig, description="Noise magnitudes, sites and seed")
    trials: int = Field(default=10_000, ge=1, description="Monte Carlo trials")
    input: Optional[InputStateSpec] = Field(default=None, description="Input state for run; Haar-random when omitted")
    sweep: Optional[SweepParams] = Field(default=None, description="Required by the sweep command")
    amplify: AmplifyParams = Field(default_factory=AmplifyParams)
    certify: CertifyParams = Field(default_factory=CertifyParams)
    output_path: Optional[Path] = Field(default=None, description="Output file; stdout when omitted")
    output_format: Optional[OutputFormat] = Field(default=None, description="csv or json; per-command default")

    @property
    def resolved_format(self) -> str:
        return self.output_format or DEFAULT_FORMATS[self.command]

    @property
    def certify_eta(self) -> float:
        return self.certify.eta if self.certify.eta is not None else self.noise.eta_bell

    @property
    def certify_pairs(self) -> int:
        return self.certify.n_pairs if self.certify.n_pairs is not None else max(2, self.trials)

    def sweep_spec(self) -> SweepSpec:
        if self.sweep is None:
            raise ConfigError("sweep: required for the sweep command", key="sweep")
        return SweepSpec(
            parameter=self.sweep.parameter,
            values=self.sweep.values,
            trials_per_point=self.trials,
            base_config=self.noise,
        )


# keys whose override text is used verbatim
TEXT_KEYS = frozenset({"command", "output_path", "output_format", "sweep.parameter"})


def _parse_value(key: str, text: str) -> Any:
    if key in TEXT_KEYS:
        return text
    if key == "sweep.values":
        try:
            return [float(item) for item in text.split(",") if item.strip()]
        except ValueError:
            raise ConfigError(f"sweep.values: expected a comma-separated list of numbers, got {text!r}", key=key)
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _apply_override(document: Dict[str, Any], flag: str, text: str) -> None:
    key = FLAG_KEYS.get(flag, flag)
    *parents, leaf = key.split(".")
    node = document
    for part in parents:
        child = node.setdefault(part, {})
        if not isinstance(child, dict):
            raise ConfigError(f"{key}: cannot override inside non-object {part!r}", key=key)
        node = child
    node[leaf] = _parse_value(key, text)


def _validation_error(exc: ValidationError) -> ConfigError:
    problems = []
    for error in exc.errors():
        key = ".".join(str(part) for part in error["loc"]) or "config"
        problems.append((key, error["msg"]))
    message = "; ".join(f"{key}: {msg}" for key, msg in problems)
    return ConfigError(f"invalid config: {message}", key=problems[0][0])


def parse_config(
    json_text: str,
    flag_overrides: Sequence[Tuple[str, str]] = (),
    settings: Optional[LabSettings] = None,
) -> RunConfig:
    """Build a RunConfig from JSON text and (key, value) overrides; flags win"""
    settings = settings or load_config()

    try:
        document = json.loads(json_text) if json_text.strip() else {}
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON: {exc.msg} at line {exc.lineno} column {exc.colno}") from exc
    if not isinstance(document, dict):
        raise ConfigError("config must be a JSON object")

    for flag, text in flag_overrides:
        _apply_override(document, flag, text)
    document.setdefault("trials", settings.default_trials)

    try:
        config = RunConfig.model_validate(document)
    except ValidationError as exc:
        raise _validation_error(exc) from exc

    if "seed" not in config.noise.model_fields_set:
        raise ConfigError("noise.seed: an explicit seed is required (config file or --seed)", key="noise.seed")
    if config.command == "sweep":
        try:
            config.sweep_spec()
        except ConfigError:
            raise
        except InputError as exc:
            raise ConfigError(f"sweep.values: {exc}", key="sweep.values") from exc

    logger.info(f"Parsed {config.command} config with seed {config.noise.seed} and {config.trials} trials")
    return config
