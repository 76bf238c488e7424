# Experiment dispatch and deterministic CSV/JSON output

import csv
import io
import json
import logging
import math
import sys
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, TextIO

from ..analysis.amplification import amplification_experiment
from ..analysis.certifier import certify_source
from ..analysis.monte_carlo import estimate_mean_fidelity, sweep
from ..config.run_config import RunConfig
from ..config.settings import LabSettings, load_config
from ..core.exceptions import InputError, TeleportLabError
from ..core.protocol import OUTCOMES, run_trial
from ..noise.models import haar_random_qubit
from ..noise.rng import RngStream, StreamKey

logger = logging.getLogger(__name__)

PROGRAM = "teleport-lab"

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_OUTPUT = 2
EXIT_CONTRACT = 3

SWEEP_HEADER = ["param", "value", "mean_fidelity", "stderr", "n00", "n01", "n10", "n11", "trials"]
ESTIMATE_HEADER = ["mean_fidelity", "stderr", "n00", "n01", "n10", "n11", "trials"]
AMPLIFY_HEADER = ["sites", "mean_infidelity", "stderr", "trials", "ratio_to_max_single"]
CERTIFY_HEADER = [
    "n_pairs",
    "zz_correlator",
    "stderr_zz",
    "xx_correlator",
    "stderr_xx",
    "witness",
    "stderr_witness",
    "entangled",
]
RUN_HEADER = [
    "input_a_re",
    "input_a_im",
    "input_b_re",
    "input_b_im",
    "outcome",
    "reported",
    "received",
    "correction",
    "bob_a_re",
    "bob_a_im",
    "bob_b_re",
    "bob_b_im",
    "fidelity",
    "branch_probability",
]


@dataclass
class CommandOutput:
    """One command's result in both output shapes"""

    payload: Dict[str, Any]
    header: List[str]
    rows: List[List[Any]] = field(default_factory=list)


class NumberFormat:
    """Pinned float-to-text rule shared by the CSV and JSON emitters"""

    def __init__(self, digits: int = 12):
        self.spec = f".{digits}g"

    def text(self, value: float) -> str:
        value = float(value)
        if not math.isfinite(value):
            return "nan"
        return format(value, self.spec)

    def json(self, value: float) -> Optional[float]:
        value = float(value)
        if not math.isfinite(value):
            return None
        return float(format(value, self.spec))

    def cell(self, value: Any) -> str:
        if isinstance(value, bool):
            return "true" if value else "false"
        if isinstance(value, int):
            return str(value)
        if isinstance(value, float):
            return self.text(value)
        return str(value)


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, InputError):
        return EXIT_INPUT
    if isinstance(exc, OSError):
        return EXIT_OUTPUT
    return EXIT_CONTRACT


def report_error(exc: BaseException, stream: Optional[TextIO] = None) -> int:
    """One-line diagnostic on stderr; returns the exit code"""
    stream = stream or sys.stderr
    message = " ".join(str(exc).split()) or type(exc).__name__
    stream.write(f"{PROGRAM}: error: {message}\n")
    return exit_code_for(exc)


class ExperimentRunner:
    """Runs one validated RunConfig and writes its output"""

    def __init__(self, settings: Optional[LabSettings] = None):
        self.settings = settings or load_config()
        self.numbers = NumberFormat(self.settings.float_digits)
        self.logger = logging.getLogger(__name__)
        self._handlers: Dict[str, Callable[[RunConfig], CommandOutput]] = {
            "run": self._run,
            "estimate": self._estimate,
            "sweep": self._sweep,
            "amplify": self._amplify,
            "certify": self._certify,
        }

    def execute(self, config: RunConfig) -> int:
        """Run the command; returns the process exit code"""
        handler = self._handlers.get(config.command)
        if handler is None:
            return report_error(InputError(f"command: unknown command {config.command!r}"))

        try:
            output = handler(config)
        except TeleportLabError as exc:
            self.logger.debug(f"{config.command} failed", exc_info=True)
            return report_error(exc)

        text = self.render(output, config.resolved_format)
        try:
            self._write(text, config)
        except OSError as exc:
            path = config.output_path
            return report_error(OSError(f"cannot write output to {path}: {exc.strerror or exc}"))
        return EXIT_OK

    def render(self, output: CommandOutput, output_format: str) -> str:
        if output_format == "json":
            return json.dumps(output.payload, indent=2) + "\n"
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(output.header)
        for row in output.rows:
            writer.writerow([self.numbers.cell(value) for value in row])
        return buffer.getvalue()

    def _write(self, text: str, config: RunConfig) -> None:
        if config.output_path is None:
            sys.stdout.write(text)
            sys.stdout.flush()
            return
        with open(config.output_path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        self.logger.info(f"Wrote {config.command} output to {config.output_path}")

    # Individual command implementations
    def _run(self, config: RunConfig) -> CommandOutput:
        trial = RngStream(config.noise.seed).child(0)
        if config.input is not None:
            phi = config.input.to_state()
        else:
            phi = haar_random_qubit(trial.child(StreamKey.INPUT))
        record = run_trial(phi, config.noise, trial)

        bob_a, bob_b = (complex(z) for z in record.bob_state.amps)
        row = [
            record.input_a.real,
            record.input_a.imag,
            record.input_b.real,
            record.input_b.imag,
            record.outcome,
            record.reported,
            record.received,
            record.correction_label,
            bob_a.real,
            bob_a.imag,
            bob_b.real,
            bob_b.imag,
            record.fidelity,
            record.branch_probability,
        ]
        return CommandOutput(record.to_dict(number=self.numbers.json), RUN_HEADER, [row])

    def _estimate(self, config: RunConfig) -> CommandOutput:
        estimate = estimate_mean_fidelity(config.noise, config.trials, config.noise.seed)
        payload = {
            "mean_fidelity": self.numbers.json(estimate.mean),
            "stderr": self.numbers.json(estimate.stderr),
            "trials": estimate.trials,
            "outcome_histogram": dict(zip(OUTCOMES, estimate.outcome_histogram)),
        }
        row = [estimate.mean, estimate.stderr, *estimate.outcome_histogram, estimate.trials]
        return CommandOutput(payload, ESTIMATE_HEADER, [row])

    def _sweep(self, config: RunConfig) -> CommandOutput:
        result = sweep(config.sweep_spec())
        rows = [
            [
                point.parameter,
                point.value,
                point.mean_fidelity,
                point.stderr,
                *point.outcome_histogram,
                point.trials,
            ]
            for point in result.points
        ]
        payload = {
            "parameter": result.parameter,
            "points": [
                {
                    "value": self.numbers.json(point.value),
                    "mean_fidelity": self.numbers.json(point.mean_fidelity),
                    "stderr": self.numbers.json(point.stderr),
                    "outcome_histogram": dict(zip(OUTCOMES, point.outcome_histogram)),
                    "trials": point.trials,
                }
                for point in result.points
            ],
        }
        return CommandOutput(payload, SWEEP_HEADER, rows)

    def _amplify(self, config: RunConfig) -> CommandOutput:
        report = amplification_experiment(config.amplify.sigma, config.trials, config.noise.seed)
        ratios = report.ratios()
        rows = [[row.label, row.mean_infidelity, row.stderr, row.trials, ratios[row.label]] for row in report.rows]
        payload = {
            "sigma": self.numbers.json(report.sigma),
            "rows": [
                {
                    "sites": row.label,
                    "mean_infidelity": self.numbers.json(row.mean_infidelity),
                    "stderr": self.numbers.json(row.stderr),
                    "trials": row.trials,
                    "ratio_to_max_single": self.numbers.json(ratios[row.label]),
                }
                for row in report.rows
            ],
            "max_single": report.max_single.label,
            "additive_prediction": self.numbers.json(report.additive_prediction),
            "ratio_all_over_max": self.numbers.json(report.ratio_to_max_single),
            "ratio_all_over_sum": self.numbers.json(report.ratio_to_additive),
        }
        return CommandOutput(payload, AMPLIFY_HEADER, rows)

    def _certify(self, config: RunConfig) -> CommandOutput:
        report = certify_source(config.certify_eta, config.certify_pairs, config.noise.seed)
        values = [
            report.n_pairs,
            report.zz_correlator,
            report.stderr_zz,
            report.xx_correlator,
            report.stderr_xx,
            report.witness,
            report.stderr_witness,
            report.entangled,
        ]
        payload = {
            key: (self.numbers.json(value) if isinstance(value, float) else value)
            for key, value in zip(CERTIFY_HEADER, values)
        }
        return CommandOutput(payload, CERTIFY_HEADER, [values])


def execute(config: RunConfig, settings: Optional[LabSettings] = None) -> int:
    return ExperimentRunner(settings).execute(config)
