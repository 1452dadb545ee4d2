"""
Experiment runner.
Validates a run config, executes the experiment and writes the manifest last.
"""
import time

import structlog

from ..analysis.reporter import ReportWriter, RunManifest
from ..core.config import RunConfig
from ..core.errors import ConfigError, LabError
from . import audits, benches  # noqa: F401  (register experiments)
from .registry import EXPERIMENT_REGISTRY


logger = structlog.get_logger()


def run(config: RunConfig) -> RunManifest:
    """
    Execute one experiment and emit its CSVs plus manifest.txt.

    Args:
        config: validated run config

    Returns:
        RunManifest with config echo, summary scalars and checksums

    Raises:
        LabError: any domain error, with the experiment name added to its context
    """
    body = EXPERIMENT_REGISTRY.get(config.experiment)
    if body is None:
        raise ConfigError(f"unknown experiment '{config.experiment}'", key="experiment")

    params = config.typed_parameters()
    log = logger.bind(experiment=config.experiment, seed=config.seed)
    log.info("experiments.run.started", output_dir=config.output_dir)

    writer = ReportWriter(config.output_dir)
    start = time.perf_counter()
    try:
        summary = body(params, writer, config.seed)
    except LabError as exc:
        exc.context.setdefault("experiment", config.experiment)
        log.error("experiments.run.failed", code=exc.code, error=exc.message)
        raise

    manifest = RunManifest(
        experiment=config.experiment,
        seed=config.seed,
        config=params.model_dump(),
        summary=summary,
        duration_seconds=time.perf_counter() - start,
    )
    writer.write_manifest(manifest)
    log.info(
        "experiments.run.completed",
        duration=round(manifest.duration_seconds, 3),
        artifacts=sorted(manifest.checksums),
    )
    return manifest
