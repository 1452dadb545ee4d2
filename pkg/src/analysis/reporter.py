"""
Report writer.
Emits experiment CSVs and the run manifest that checksums them.
"""
import csv
import hashlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence

import structlog


logger = structlog.get_logger()

TOOL_VERSION = "0.1.0"
MANIFEST_NAME = "manifest.txt"


def format_value(value: Any) -> str:
    """17 significant digits for floats, so values round-trip exactly."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    if value is None:
        return ""
    return str(value)


def sha256_file(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


@dataclass
class RunManifest:
    """Config echo, summary scalars and artifact checksums of one run."""
    experiment: str
    seed: int
    config: dict[str, Any] = field(default_factory=dict)
    summary: dict[str, Any] = field(default_factory=dict)
    checksums: dict[str, str] = field(default_factory=dict)
    duration_seconds: float = 0.0
    tool_version: str = TOOL_VERSION
    path: Optional[Path] = None

    def lines(self) -> list[str]:
        out = [
            f"tool_version={self.tool_version}",
            f"experiment={self.experiment}",
            f"seed={self.seed}",
        ]
        out += [f"config.{k}={format_value(v)}" for k, v in sorted(self.config.items())]
        out += [f"summary.{k}={format_value(v)}" for k, v in sorted(self.summary.items())]
        out.append(f"duration_seconds={format_value(self.duration_seconds)}")
        out += [f"sha256 {digest} {name}" for name, digest in sorted(self.checksums.items())]
        return out


class ReportWriter:
    """Write CSV artifacts into one output directory and track them for the manifest."""

    def __init__(self, output_dir: str | Path):
        self.output_dir = Path(output_dir)
        self.output_dir.mkdir(parents=True, exist_ok=True)
        self.artifacts: list[Path] = []

    def write_csv(self, name: str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
        """
        Write a CSV with an exact header line.

        Args:
            name: file name inside the output directory
            header: column names
            rows: row tuples, formatted with format_value

        Returns:
            Path of the written file
        """
        path = self.output_dir / name
        count = 0
        with open(path, "w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([format_value(v) for v in row])
                count += 1
        if path not in self.artifacts:
            self.artifacts.append(path)
        logger.debug("report.csv_written", file=name, rows=count)
        return path

    def write_manifest(self, manifest: RunManifest) -> Path:
        """Checksum every artifact and write the manifest; call last."""
        manifest.checksums = {p.name: sha256_file(p) for p in self.artifacts}
        path = self.output_dir / MANIFEST_NAME
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write("\n".join(manifest.lines()) + "\n")
        manifest.path = path
        logger.info("report.manifest_written", path=str(path), artifacts=len(self.artifacts))
        return path


def read_manifest_checksums(path: str | Path) -> dict[str, str]:
    """Parse the `sha256 <hex> <file>` lines of a manifest."""
    out = {}
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            if line.startswith("sha256 "):
                _, digest, name = line.rstrip("\n").split(" ", 2)
                out[name] = digest
    return out
