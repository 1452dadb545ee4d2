"""
Log-expansion lab.
Main entry point - runs one experiment and writes its CSV reports and manifest.
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import Optional

import structlog


def configure_logging(level: str = "INFO") -> None:
    """Route structlog through stdlib logging on stderr at the given level."""
    logging.basicConfig(
        format="%(message)s",
        stream=sys.stderr,
        level=getattr(logging, level.upper(), logging.INFO),
        force=True,
    )
    structlog.configure(
        processors=[
            structlog.stdlib.add_log_level,
            structlog.stdlib.PositionalArgumentsFormatter(),
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            structlog.processors.UnicodeDecoder(),
            structlog.dev.ConsoleRenderer(colors=sys.stderr.isatty()),
        ],
        wrapper_class=structlog.stdlib.BoundLogger,
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=False,
    )


logger = structlog.get_logger()


class LabArgumentParser(argparse.ArgumentParser):
    """Argument parser whose usage errors become ConfigParseError."""

    def error(self, message: str):
        from src.core.errors import ConfigParseError

        raise ConfigParseError(message)


def build_parser() -> argparse.ArgumentParser:
    from src.core.config import EXPERIMENTS

    parser = LabArgumentParser(
        description="Run a log-expansion audit experiment",
        allow_abbrev=False,
        epilog="Any other parameter is passed as --key value (e.g. --c 1.0 --n 41).",
    )
    parser.add_argument("experiment", choices=EXPERIMENTS, help="Experiment to run")
    parser.add_argument("--config", "-c", help="Flat key=value config file")
    parser.add_argument("--out", "-o", help="Output directory")
    parser.add_argument("--seed", type=str, help="Random seed")
    parser.add_argument("--settings", default="config/settings.yaml", help="Settings YAML")
    parser.add_argument("--log-level", help="DEBUG, INFO, WARNING or ERROR")
    return parser


def parse_flag_overrides(extra: list[str]) -> dict[str, str]:
    """Turn trailing `--key value` pairs into config overrides."""
    from src.core.errors import ConfigParseError, DuplicateKeyError

    out: dict[str, str] = {}
    i = 0
    while i < len(extra):
        token = extra[i]
        if not token.startswith("--") or len(token) == 2:
            raise ConfigParseError(f"expected --key value, got {token!r}", token=token)
        key = token[2:].replace("-", "_")
        if "=" in key:
            key, value = key.split("=", 1)
            i += 1
        elif i + 1 < len(extra):
            value = extra[i + 1]
            i += 2
        else:
            raise ConfigParseError(f"flag --{key} is missing its value", token=token)
        if key in out:
            raise DuplicateKeyError(f"flag --{key} given twice", key=key)
        out[key] = value
    return out


def main(argv: Optional[list[str]] = None) -> int:
    """Parse arguments, run the experiment and return the exit status."""
    from src.core.config import load_settings, parse_config
    from src.core.errors import ConfigError, LabError
    from src.experiments import run

    configure_logging()
    try:
        args, extra = build_parser().parse_known_args(argv)
        settings = load_settings(args.settings)
        configure_logging(args.log_level or settings.system.log_level)

        text = ""
        if args.config:
            try:
                text = Path(args.config).read_text(encoding="utf-8")
            except (OSError, UnicodeDecodeError) as exc:
                raise ConfigError(f"cannot read config file {args.config}: {exc}", path=args.config) from None
        overrides = parse_flag_overrides(extra)
        overrides["experiment"] = args.experiment
        if args.out:
            overrides["output_dir"] = args.out
        if args.seed is not None:
            overrides["seed"] = args.seed

        config = parse_config(text, overrides, settings)
        logger.info("config.loaded", experiment=config.experiment, output_dir=config.output_dir)
        manifest = run(config)
    except LabError as exc:
        print(exc.error_line(), file=sys.stderr)
        logger.error("main.error", code=exc.code, **{k: str(v) for k, v in exc.context.items()})
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"ERROR E_INTERNAL: {exc}", file=sys.stderr)
        logger.exception("main.internal_error")
        return 1

    print(manifest.path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
