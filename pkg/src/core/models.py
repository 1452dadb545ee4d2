"""
Data models for the lab.
Uses Pydantic for validation; every domain value is frozen after construction.
"""
import math
from enum import Enum
from typing import Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from .errors import ExpansionPointError, ParameterError


class FrozenModel(BaseModel):
    """Immutable model whose float fields must all be finite."""
    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _check_finite(self):
        for name, value in self.__dict__.items():
            if isinstance(value, float) and not math.isfinite(value):
                raise ParameterError(
                    f"{type(self).__name__}.{name} must be finite, got {value}",
                    field=name,
                )
        return self


# ==============================================
# EXPANSION FAMILIES
# ==============================================

class TiedLogExpansion1D(FrozenModel):
    """a1 + a2*x + a2*(x+a3)*ln(x+a3)."""
    a1: float
    a2: float
    a3: float


class TiedLogExpansion2D(FrozenModel):
    """a1 + a2*x + a3*y + a2*(x+a3)*ln(x+a3); a3 is both y-coefficient and shift."""
    a1: float
    a2: float
    a3: float


TiedExpansion = Union[TiedLogExpansion1D, TiedLogExpansion2D]


class GeneralLogAnsatz(FrozenModel):
    """b0 + b1*x + bL*(x+s)*ln(x+s), linear and log coefficients untied."""
    b0: float
    b1: float
    bL: float
    s: float


class GeneralLogAnsatz2D(FrozenModel):
    """b0 + b1*x + by*y + bL*(x+s)*ln(x+s)."""
    b0: float
    b1: float
    by: float
    bL: float
    s: float


class DerivationConstants(FrozenModel):
    """Expansion point and first-order data feeding the closed-form remainder."""
    c: float
    alpha: float = 1.0
    f_c: float = 0.0
    fprime_c: float = 0.0

    @model_validator(mode="after")
    def _check_domain(self):
        if self.c == 0.0:
            raise ExpansionPointError("expansion point c must be non-zero", c=self.c)
        if self.alpha <= 0.0:
            raise ParameterError(f"alpha must be > 0, got {self.alpha}", field="alpha")
        return self


class BivariateDerivationConstants(FrozenModel):
    """Two expansion points (c1, c2) with f and both partials at (c1, c2)."""
    c1: float
    c2: float
    alpha: float = 1.0
    f_c: float = 0.0
    fx_c: float = 0.0
    fy_c: float = 0.0

    @model_validator(mode="after")
    def _check_domain(self):
        if self.c1 == 0.0:
            raise ExpansionPointError("expansion point c1 must be non-zero", c=self.c1)
        if self.alpha <= 0.0:
            raise ParameterError(f"alpha must be > 0, got {self.alpha}", field="alpha")
        return self


# ==============================================
# ORACLES
# ==============================================

class RemainderReading(str, Enum):
    """How the iterated remainder integral is read."""
    RUNNING = "running"  # outer variable is the running upper limit w
    FROZEN = "frozen"    # x held fixed inside the inner integrand


class QuadratureSpec(FrozenModel):
    """Adaptive quadrature tolerance and recursion cap."""
    abs_tol: float = 1e-10
    max_depth: int = 50

    @model_validator(mode="after")
    def _check_domain(self):
        if self.abs_tol <= 0.0:
            raise ParameterError(f"abs_tol must be > 0, got {self.abs_tol}", field="abs_tol")
        if self.max_depth < 10:
            raise ParameterError(f"max_depth must be >= 10, got {self.max_depth}", field="max_depth")
        return self


class Grid1D(FrozenModel):
    """Uniform grid of n nodes on [x_min, x_max]."""
    x_min: float
    x_max: float
    n: int

    @model_validator(mode="after")
    def _check_domain(self):
        if self.n < 2:
            raise ParameterError(f"grid needs n >= 2 nodes, got {self.n}", field="n")
        if not self.x_min < self.x_max:
            raise ParameterError(
                f"grid requires x_min < x_max, got [{self.x_min}, {self.x_max}]",
                field="x_min",
            )
        return self

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n)

    @property
    def step(self) -> float:
        return (self.x_max - self.x_min) / (self.n - 1)

    def refined(self, factor: int = 2) -> "Grid1D":
        """Grid with `factor` times as many intervals over the same extent."""
        return Grid1D(x_min=self.x_min, x_max=self.x_max, n=(self.n - 1) * factor + 1)


# ==============================================
# FITTING
# ==============================================

class FitConfig(FrozenModel):
    """Profiled least-squares settings."""
    shift_search: Optional[tuple[float, float]] = None  # (lo, hi] for a3; derived from data if None
    n_shift_probes: int = 64
    refine_tol: float = 1e-10
    bc_penalty_weight: float = 1e3
    fix_a2: Optional[float] = None

    @model_validator(mode="after")
    def _check_domain(self):
        if self.n_shift_probes < 3:
            raise ParameterError("n_shift_probes must be >= 3", field="n_shift_probes")
        if self.refine_tol <= 0.0:
            raise ParameterError("refine_tol must be > 0", field="refine_tol")
        if self.bc_penalty_weight < 0.0:
            raise ParameterError("bc_penalty_weight must be >= 0", field="bc_penalty_weight")
        if self.shift_search is not None and not self.shift_search[0] < self.shift_search[1]:
            raise ParameterError("shift_search must be an increasing interval", field="shift_search")
        return self


class FitReport(FrozenModel):
    """Outcome of a tied-family fit."""
    params: TiedExpansion
    rmse: float
    max_abs_err: float
    n_samples: int
    converged: bool
    a3_identified: bool = True
    objective: float = 0.0
    bc_rmse: Optional[float] = None


# ==============================================
# PDE SUITE
# ==============================================

class RCDParams(FrozenModel):
    """Coefficients of V_t + r x V_x + 1/2 sigma^2 x^2 V_xx - r V = 0."""
    r: float
    sigma: float

    @model_validator(mode="after")
    def _check_domain(self):
        if self.sigma <= 0.0:
            raise ParameterError(f"sigma must be > 0, got {self.sigma}", field="sigma")
        return self


class HeatParams(FrozenModel):
    """Diffusivity of V_t - k V_xx = 0."""
    k: float

    @model_validator(mode="after")
    def _check_domain(self):
        if self.k <= 0.0:
            raise ParameterError(f"k must be > 0, got {self.k}", field="k")
        return self


Equation = Union[RCDParams, HeatParams]


class ResidualReport(FrozenModel):
    """Grid-wise residual (or error) metrics."""
    equation: str
    n_x: int
    n_t: int
    rms_residual: float
    max_abs_residual: float
    rms_error_vs_reference: Optional[float] = None
    samples: list[tuple[float, float, float]] = []


# ==============================================
# PORTFOLIO
# ==============================================

class MarketParams(FrozenModel):
    """Single risky asset plus money account; optional per-step curves."""
    mu: float
    r: float
    sigma: float
    T: float = 1.0
    x0: float = 1.0
    mu_curve: Optional[tuple[float, ...]] = None
    r_curve: Optional[tuple[float, ...]] = None
    sigma_curve: Optional[tuple[float, ...]] = None

    @model_validator(mode="after")
    def _check_domain(self):
        if self.sigma <= 0.0:
            raise ParameterError(f"sigma must be > 0, got {self.sigma}", field="sigma")
        if self.T <= 0.0:
            raise ParameterError(f"T must be > 0, got {self.T}", field="T")
        if self.x0 <= 0.0:
            raise ParameterError(f"x0 must be > 0, got {self.x0}", field="x0")
        if self.sigma_curve is not None and min(self.sigma_curve) <= 0.0:
            raise ParameterError("sigma_curve entries must be > 0", field="sigma_curve")
        return self

    def coefficients(self, n_steps: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Per-step (mu, r, sigma) arrays of length n_steps."""
        out = []
        for name, const, curve in (
            ("mu_curve", self.mu, self.mu_curve),
            ("r_curve", self.r, self.r_curve),
            ("sigma_curve", self.sigma, self.sigma_curve),
        ):
            if curve is None:
                out.append(np.full(n_steps, const))
            elif len(curve) != n_steps:
                raise ParameterError(
                    f"{name} has {len(curve)} entries, expected n_steps={n_steps}",
                    field=name,
                )
            else:
                out.append(np.asarray(curve, dtype=float))
        return out[0], out[1], out[2]


class MCEstimate(FrozenModel):
    """Monte-Carlo estimate of expected terminal utility."""
    mean: float
    std_err: float
    n_paths: int
    seed: int
    label: str = ""
    n_steps: int = 0
    bankrupt_paths: int = 0
    domain_violations: int = 0
    concavity_violation: bool = False
