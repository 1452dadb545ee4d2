"""Analysis module for summary metrics and report files."""
from .metrics import (
    SAMPLE_CAP, stable_sum, rms, max_abs, rms_and_max, mean_std_err, subsample,
)
from .reporter import (
    TOOL_VERSION, MANIFEST_NAME, RunManifest, ReportWriter,
    format_value, sha256_file, read_manifest_checksums,
)

__all__ = [
    # Metrics
    'SAMPLE_CAP', 'stable_sum', 'rms', 'max_abs', 'rms_and_max', 'mean_std_err', 'subsample',
    # Reports
    'TOOL_VERSION', 'MANIFEST_NAME', 'RunManifest', 'ReportWriter',
    'format_value', 'sha256_file', 'read_manifest_checksums',
]
