"""Core module containing configuration, models, and errors."""
from .errors import (
    LabError, LogDomainError, ExpansionPointError, ParameterError,
    SingularityError, ConvergenceError, SolverInstabilityError, ConcavityError,
    DegenerateAnsatzError, RankDeficiencyError, GridMismatchError,
    ConfigError, ConfigParseError, DuplicateKeyError, UnknownKeyError, TypeMismatchError,
)
from .models import (
    TiedLogExpansion1D, TiedLogExpansion2D, GeneralLogAnsatz, GeneralLogAnsatz2D,
    DerivationConstants, BivariateDerivationConstants,
    RemainderReading, QuadratureSpec, Grid1D,
    FitConfig, FitReport,
    RCDParams, HeatParams, ResidualReport,
    MarketParams, MCEstimate,
)
from .config import (
    Settings, SystemConfig, load_settings,
    RunConfig, EXPERIMENTS, PARAMETER_MODELS, parse_config, parse_lines, validate_parameters,
)

__all__ = [
    # Errors
    'LabError', 'LogDomainError', 'ExpansionPointError', 'ParameterError',
    'SingularityError', 'ConvergenceError', 'SolverInstabilityError', 'ConcavityError',
    'DegenerateAnsatzError', 'RankDeficiencyError', 'GridMismatchError',
    'ConfigError', 'ConfigParseError', 'DuplicateKeyError', 'UnknownKeyError', 'TypeMismatchError',
    # Models
    'TiedLogExpansion1D', 'TiedLogExpansion2D', 'GeneralLogAnsatz', 'GeneralLogAnsatz2D',
    'DerivationConstants', 'BivariateDerivationConstants',
    'RemainderReading', 'QuadratureSpec', 'Grid1D',
    'FitConfig', 'FitReport',
    'RCDParams', 'HeatParams', 'ResidualReport',
    'MarketParams', 'MCEstimate',
    # Config
    'Settings', 'SystemConfig', 'load_settings',
    'RunConfig', 'EXPERIMENTS', 'PARAMETER_MODELS', 'parse_config', 'parse_lines',
    'validate_parameters',
]
