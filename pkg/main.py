# teleport-lab
# Deterministic, seedable simulator of quantum teleportation with error injection,
# Monte Carlo fidelity analysis and a Bell-pair source certifier

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from src.cli.commands import PROGRAM, execute, report_error
from src.config.run_config import parse_config
from src.config.settings import LabSettings, load_config
from src.core.exceptions import ConfigError, TeleportLabError

COMMANDS = ["run", "estimate", "sweep", "amplify", "certify"]


def setup_logging(settings: LabSettings):
    """Configure logging for the application"""
    console = logging.StreamHandler(sys.stderr)
    console.setLevel(settings.log_level)
    handlers: List[logging.Handler] = [console]

    if settings.log_file:
        Path(settings.log_file).parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(settings.log_file)
        file_handler.setLevel(logging.INFO)
        handlers.append(file_handler)

    logging.basicConfig(
        level=logging.INFO if settings.log_file else settings.log_level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers,
        force=True,
    )


class LabArgumentParser(argparse.ArgumentParser):
    """Raises ConfigError on usage errors instead of exiting"""

    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = LabArgumentParser(
        prog=PROGRAM,
        description="Simulate quantum teleportation under noise and analyse its fidelity.",
    )
    parser.add_argument("command", choices=COMMANDS, help="Experiment to run")
    parser.add_argument("--config", type=Path, help="JSON config file")
    parser.add_argument("--seed", help="Master seed (overrides noise.seed)")
    parser.add_argument("--trials", help="Monte Carlo trials")
    parser.add_argument("--param", help="Swept noise parameter")
    parser.add_argument("--values", help="Comma-separated sweep values")
    parser.add_argument("--out", help="Output file (default: stdout)")
    parser.add_argument("--format", choices=["csv", "json"], help="Output format")
    parser.add_argument(
        "--set",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="Override any config key by dotted path, e.g. noise.q_readout=0.05",
    )
    return parser


def collect_overrides(args: argparse.Namespace) -> List[Tuple[str, str]]:
    """Flag overrides in application order; explicit flags after --set"""
    overrides: List[Tuple[str, str]] = [("command", args.command)]
    for item in args.set:
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}", key=item)
        overrides.append((key.strip(), value))
    for flag in ("seed", "trials", "param", "values", "out", "format"):
        value = getattr(args, flag)
        if value is not None:
            overrides.append((flag, value))
    return overrides


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main application entry point"""
    try:
        args = build_parser().parse_args(argv)
    except ConfigError as e:
        return report_error(e)

    try:
        settings = load_config()
    except Exception as e:
        return report_error(ConfigError(f"invalid TELEPORT_LAB_ settings: {e}"))

    setup_logging(settings)
    logger = logging.getLogger(__name__)

    try:
        json_text = args.config.read_text(encoding="utf-8") if args.config else ""
    except (OSError, UnicodeDecodeError) as e:
        reason = getattr(e, "strerror", None) or e
        return report_error(ConfigError(f"cannot read config {args.config}: {reason}", key="config"))

    try:
        config = parse_config(json_text, collect_overrides(args), settings)
    except TeleportLabError as e:
        return report_error(e)

    logger.info(f"Starting {config.command} with seed {config.noise.seed}")
    return execute(config, settings)


if __name__ == "__main__":
    sys.exit(main())
