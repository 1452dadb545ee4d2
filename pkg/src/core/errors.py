"""
Error hierarchy for the lab.
Every error carries a stable code that the CLI prints as `ERROR <code>: ...`.
"""
from typing import Optional


class LabError(Exception):
    """Base class for all lab errors."""
    code = "E_LAB"

    def __init__(self, message: str, **context):
        super().__init__(message)
        self.message = message
        self.context = context

    def error_line(self) -> str:
        """Machine-readable one-line form."""
        return f"ERROR {self.code}: {self.message}"


class LogDomainError(LabError):
    """Evaluation point outside the log domain (x + shift must be > 0)."""
    code = "E_LOG_DOMAIN"

    def __init__(self, message: str, index: Optional[tuple] = None, **context):
        super().__init__(message, index=index, **context)
        self.index = index


class ExpansionPointError(LabError):
    """Expansion point c = 0, excluded by the first-order expansion."""
    code = "E_EXPANSION_POINT"


class ParameterError(LabError):
    """A parameter lies outside its declared domain."""
    code = "E_PARAMETER"


class SingularityError(LabError):
    """Quadrature integrand denominator collapsed towards zero."""
    code = "E_SINGULARITY"


class ConvergenceError(LabError):
    """Adaptive recursion exhausted before meeting the tolerance."""
    code = "E_NO_CONVERGENCE"


class SolverInstabilityError(LabError):
    """Non-finite values appeared in a finite-difference solution."""
    code = "E_INSTABILITY"


class ConcavityError(LabError):
    """Maximisation requested on a non-concave quadratic."""
    code = "E_CONCAVITY"


class DegenerateAnsatzError(LabError):
    """Ansatz with a2 = 0, so V_xx vanishes and pi* is undefined."""
    code = "E_DEGENERATE_ANSATZ"


class RankDeficiencyError(LabError):
    """Linear least-squares design matrix is rank deficient."""
    code = "E_RANK_DEFICIENT"


class GridMismatchError(LabError):
    """Requested grid extends beyond the reference solution."""
    code = "E_GRID_MISMATCH"


class ConfigError(LabError):
    """Base for configuration errors."""
    code = "E_CONFIG"


class ConfigParseError(ConfigError):
    code = "E_CONFIG_PARSE"


class DuplicateKeyError(ConfigError):
    code = "E_DUPLICATE_KEY"


class UnknownKeyError(ConfigError):
    code = "E_UNKNOWN_KEY"


class TypeMismatchError(ConfigError):
    code = "E_TYPE_MISMATCH"

    def __init__(self, key: str, value: str, expected: str):
        super().__init__(
            f"key '{key}' expects {expected}, got {value!r}",
            key=key, value=value, expected=expected,
        )
        self.key = key
