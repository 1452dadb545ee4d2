#!/usr/bin/env python3
"""
Run every experiment with its defaults into one output tree.
"""
import argparse
import sys
from pathlib import Path

# Add parent directory to path
sys.path.insert(0, str(Path(__file__).parent.parent))

import structlog

from main import configure_logging
from src.core.config import EXPERIMENTS, load_settings, parse_config
from src.core.errors import LabError
from src.experiments import run


logger = structlog.get_logger()


def main(out: str, seed: int, settings_path: str, only: list[str]) -> int:
    """Run the selected experiments; returns the number of failures."""
    settings = load_settings(settings_path)
    configure_logging(settings.system.log_level)

    failures = 0
    for name in only or EXPERIMENTS:
        overrides = {
            "experiment": name,
            "output_dir": str(Path(out) / name),
            "seed": str(seed),
        }
        try:
            manifest = run(parse_config("", overrides, settings))
        except LabError as exc:
            failures += 1
            print(f"{name}: {exc.error_line()}", file=sys.stderr)
            continue
        print(f"{name}: {manifest.path}")

    logger.info("run_all.completed", experiments=len(only or EXPERIMENTS), failures=failures)
    return failures


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description="Run all experiments with defaults")
    parser.add_argument(
        "--out", "-o", default="out",
        help="Root output directory (one subdirectory per experiment)"
    )
    parser.add_argument("--seed", type=int, default=0, help="Seed for every run")
    parser.add_argument(
        "--settings", default="config/settings.yaml",
        help="Settings YAML with per-experiment defaults"
    )
    parser.add_argument(
        "--only", nargs="*", choices=EXPERIMENTS, default=[],
        help="Subset of experiments to run"
    )

    args = parser.parse_args()
    sys.exit(1 if main(args.out, args.seed, args.settings, args.only) else 0)
