"""
Core configuration module.
Loads settings from YAML and environment variables, and parses run configs.
"""
import os
from pathlib import Path
from typing import Any, Literal, Optional

import yaml
from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, ValidationError

from .errors import (
    ConfigError,
    ConfigParseError,
    DuplicateKeyError,
    TypeMismatchError,
    UnknownKeyError,
)


# ==============================================
# SETTINGS
# ==============================================

class SystemConfig(BaseModel):
    """Process-wide settings."""
    log_level: str = "INFO"
    output_dir: str = "out"
    seed: int = 0


class Settings(BaseModel):
    """Main configuration container."""
    system: SystemConfig = SystemConfig()
    # experiment name -> parameter overrides applied over the model defaults
    experiments: dict[str, dict[str, Any]] = {}


def load_settings(config_path: str = "config/settings.yaml") -> Settings:
    """
    Load settings from the YAML file and environment variables.

    Args:
        config_path: Path to the YAML settings file

    Returns:
        Settings with LAB_OUTPUT_DIR, LAB_LOG_LEVEL and LAB_SEED applied
    """
    env_path = Path("config/.env")
    if env_path.exists():
        load_dotenv(env_path)
    else:
        load_dotenv()

    data: dict[str, Any] = {}
    yaml_path = Path(config_path)
    if yaml_path.exists():
        with open(yaml_path, "r", encoding="utf-8") as f:
            raw = yaml.safe_load(f)
            if raw:
                data.update(raw)

    system = dict(data.get("system") or {})
    if os.getenv("LAB_OUTPUT_DIR"):
        system["output_dir"] = os.getenv("LAB_OUTPUT_DIR")
    if os.getenv("LAB_LOG_LEVEL"):
        system["log_level"] = os.getenv("LAB_LOG_LEVEL")
    if os.getenv("LAB_SEED"):
        seed = os.getenv("LAB_SEED")
        try:
            system["seed"] = int(seed)
        except ValueError:
            raise TypeMismatchError("LAB_SEED", seed, "an integer") from None

    return Settings(system=SystemConfig(**system), experiments=data.get("experiments") or {})


# ==============================================
# EXPERIMENT PARAMETERS
# ==============================================

class ExperimentParams(BaseModel):
    """Base for experiment parameters; unknown keys are rejected."""
    model_config = ConfigDict(extra="forbid", frozen=True)


class ExpandEvalParams(ExperimentParams):
    a1: float = 0.5
    a2: float = -1.0
    a3: float = 2.0
    family: Literal["1d", "2d"] = "1d"
    y: float = 0.0
    x_min: float = 0.0
    x_max: float = 5.0
    n: int = 51


class RemainderAuditParams(ExperimentParams):
    c: float = 1.0
    alpha: float = 1.0
    f_c: float = 0.0
    fprime_c: float = 1.0
    x_min: float = 1.0
    x_max: float = 3.0
    n: int = 41
    abs_tol: float = 1e-10
    max_depth: int = 50
    reading: Literal["running", "frozen"] = "running"


class FitFunctionParams(ExperimentParams):
    target: Literal["sin", "exp", "sqrt", "tied", "xy", "tied2d"] = "sin"
    x_min: float = 0.1
    x_max: float = 2.0
    n: int = 50
    y_min: float = 0.0
    y_max: float = 1.0
    n_y: int = 5
    # generating constants for the tied targets
    a1: float = 0.5
    a2: float = -1.0
    a3: float = 2.0
    shift_lo: Optional[float] = None
    shift_hi: Optional[float] = None
    n_shift_probes: int = 64
    refine_tol: float = 1e-10


class FitPDEParams(ExperimentParams):
    equation: Literal["rcd", "heat"] = "rcd"
    r: float = 0.05
    sigma: float = 0.2
    k: float = 1.0
    x_min: float = 0.5
    x_max: float = 2.0
    n_x: int = 21
    t_max: float = 1.0
    n_t: int = 11
    # boundary data from V = x (rcd) or V = x^2 + 2kt (heat)
    boundary: Literal["exact", "none"] = "exact"
    bc_penalty_weight: float = 1e3
    fix_a2: Optional[float] = None
    shift_lo: Optional[float] = None
    shift_hi: Optional[float] = None
    n_shift_probes: int = 64
    refine_tol: float = 1e-10


class PDEResidualParams(ExperimentParams):
    equation: Literal["rcd", "heat"] = "rcd"
    r: float = 0.05
    sigma: float = 0.2
    k: float = 1.0
    a1: float = 0.0
    a2: float = -1.0
    a3: float = 0.5
    x_min: float = 0.5
    x_max: float = 2.0
    n_x: int = 41
    t_max: float = 1.0
    n_t: int = 21


class HeatBenchParams(ExperimentParams):
    k: float = 1.0
    t0: float = 0.25  # Gaussian kernel time offset
    x_min: float = -3.0
    x_max: float = 3.0
    n_x: int = 41
    t_max: float = 0.5
    n_t: int = 41
    bc_penalty_weight: float = 1e3


class RCDBenchParams(ExperimentParams):
    r: float = 0.05
    sigma: float = 0.2
    terminal: Literal["power", "linear", "call"] = "power"
    power: float = 2.5
    strike: float = 1.0
    x_min: float = 0.5
    x_max: float = 2.5
    n_x: int = 41
    T: float = 1.0
    n_t: int = 41
    rannacher_steps: int = 2
    bc_penalty_weight: float = 1e3


class PortfolioBenchParams(ExperimentParams):
    mu: float = 0.10
    r: float = 0.05
    sigma: float = 0.2
    T: float = 1.0
    x0: float = 1.0
    n_paths: int = 10_000
    n_steps: Optional[int] = None
    utility: Literal["log", "capped_log", "crra"] = "log"
    gamma: float = 1.0
    merton_gamma: float = 1.0
    ansatz_a1: float = 0.0
    ansatz_a2: float = -1.0
    ansatz_a3: float = 0.0


PARAMETER_MODELS: dict[str, type[ExperimentParams]] = {
    "expand-eval": ExpandEvalParams,
    "remainder-audit": RemainderAuditParams,
    "fit-function": FitFunctionParams,
    "fit-pde": FitPDEParams,
    "pde-residual": PDEResidualParams,
    "heat-bench": HeatBenchParams,
    "rcd-bench": RCDBenchParams,
    "portfolio-bench": PortfolioBenchParams,
}

EXPERIMENTS = tuple(PARAMETER_MODELS)


# ==============================================
# RUN CONFIG
# ==============================================

class RunConfig(BaseModel):
    """A validated request to run one experiment."""
    model_config = ConfigDict(frozen=True)

    experiment: str
    parameters: dict[str, Any] = {}
    output_dir: str = "out"
    seed: int = 0

    def typed_parameters(self) -> ExperimentParams:
        return PARAMETER_MODELS[self.experiment](**self.parameters)


def _expected(model: type[ExperimentParams], key: str) -> str:
    annotation = model.model_fields[key].annotation
    return getattr(annotation, "__name__", str(annotation))


def validate_parameters(experiment: str, raw: dict[str, Any]) -> ExperimentParams:
    """
    Build the typed parameter model, mapping pydantic errors to config errors.

    Raises:
        UnknownKeyError: for a key the experiment does not declare
        TypeMismatchError: naming the first key whose value does not parse
    """
    model = PARAMETER_MODELS[experiment]
    for key in raw:
        if key not in model.model_fields:
            raise UnknownKeyError(f"unknown key '{key}' for experiment {experiment}", key=key)
    try:
        return model(**raw)
    except ValidationError as exc:
        err = exc.errors()[0]
        key = str(err["loc"][0]) if err["loc"] else "?"
        raise TypeMismatchError(key, str(raw.get(key)), _expected(model, key)) from None


def parse_lines(text: str) -> dict[str, str]:
    """
    Flat `key=value` lines; `#` starts a comment, blank lines are skipped.

    Raises:
        ConfigParseError: for a line without `=` or with an empty key
        DuplicateKeyError: for a key given twice
    """
    values: dict[str, str] = {}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigParseError(f"line {lineno}: expected key=value, got {line!r}", line=lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigParseError(f"line {lineno}: empty key", line=lineno)
        if key in values:
            raise DuplicateKeyError(f"line {lineno}: duplicate key '{key}'", key=key, line=lineno)
        values[key] = value
    return values


def parse_config(
    text: str,
    overrides: Optional[dict[str, str]] = None,
    settings: Optional[Settings] = None,
) -> RunConfig:
    """
    Parse a flat run config and layer it over the defaults.

    Precedence, lowest first: parameter model defaults, the settings
    `experiments.<name>` block, the text, then `overrides` (command-line flags).

    Args:
        text: config file contents
        overrides: flag values keyed like the file
        settings: defaults for output_dir, seed and per-experiment parameters

    Returns:
        RunConfig with typed parameter values
    """
    values = parse_lines(text)
    values.update(overrides or {})
    settings = settings or Settings()

    experiment = values.pop("experiment", None)
    if experiment is None:
        raise ConfigError("missing key 'experiment'", key="experiment")
    if experiment not in PARAMETER_MODELS:
        raise ConfigError(
            f"unknown experiment '{experiment}'; expected one of {', '.join(EXPERIMENTS)}",
            key="experiment",
        )

    output_dir = values.pop("output_dir", settings.system.output_dir)
    seed_text = values.pop("seed", settings.system.seed)
    try:
        seed = int(seed_text)
    except (TypeError, ValueError):
        raise TypeMismatchError("seed", str(seed_text), "an integer") from None

    raw = dict(settings.experiments.get(experiment, {}))
    raw.update(values)
    params = validate_parameters(experiment, raw)
    return RunConfig(
        experiment=experiment,
        parameters=params.model_dump(),
        output_dir=str(output_dir),
        seed=seed,
    )
