"""
Profiled least-squares fits of the tied families.

For a fixed shift a3 every objective here is linear in (a1, a2), so the inner
problem is one exact lstsq solve and only a3 is searched: a uniform probe
sweep over the shift interval, then golden-section refinement between the
neighbours of the best probe.
"""
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
import structlog

from ..analysis.metrics import rms_and_max
from ..core.errors import LogDomainError, ParameterError, RankDeficiencyError
from ..core.models import (
    Equation,
    FitConfig,
    FitReport,
    Grid1D,
    RCDParams,
    TiedLogExpansion1D,
    TiedLogExpansion2D,
)
from ..expansion import eval_tied_1d, eval_tied_2d, log_shift
from ..pde.residuals import heat_residual, rcd_residual
from .golden import golden_section_minimize


logger = structlog.get_logger()

# |a2| below this (relative to |a1|) makes the shift invisible in 1-D data
A2_ZERO_TOL = 1e-12
# lower end of the default shift interval sits this far inside the log domain
DOMAIN_MARGIN = 1e-6
DEFAULT_SHIFT_SPAN = 10.0


@dataclass(frozen=True)
class ProfileSolution:
    """Exact linear solution for one fixed shift."""
    a3: float
    a1: float
    a2: float
    objective: float         # sum of squared rows
    residual: np.ndarray     # design @ (a1, a2) - target
    design: np.ndarray
    free: tuple[bool, bool]  # whether a1, a2 were solved for


def _solve(design: np.ndarray, target: np.ndarray, a3: float, fix_a2: Optional[float]) -> ProfileSolution:
    coef = np.zeros(2)
    free = [True, True]
    rhs = target
    if fix_a2 is not None:
        coef[1] = fix_a2
        free[1] = False
        rhs = target - fix_a2 * design[:, 1]
    for j in range(2):
        # a column of zeros carries no information; the parameter stays at 0
        if free[j] and not np.any(design[:, j]):
            free[j] = False

    cols = [j for j in range(2) if free[j]]
    if cols:
        sub = design[:, cols]
        sol, _, rank, _ = np.linalg.lstsq(sub, rhs, rcond=None)
        if rank < len(cols):
            raise RankDeficiencyError(
                f"least-squares design has rank {rank} < {len(cols)} at a3 = {a3}",
                a3=a3,
                rank=int(rank),
            )
        coef[cols] = sol

    residual = design @ coef - target
    return ProfileSolution(
        a3=a3,
        a1=float(coef[0]),
        a2=float(coef[1]),
        objective=math.fsum((residual * residual).tolist()),
        residual=residual,
        design=design,
        free=(free[0], free[1]),
    )


def _function_rows(a3: float, xs: np.ndarray, fx: np.ndarray, ys: Optional[np.ndarray]):
    z = log_shift(xs, a3)
    design = np.column_stack([np.ones_like(xs), xs + z * np.log(z)])
    target = fx if ys is None else fx - a3 * ys
    return design, target


def profile_linear(
    a3: float,
    xs: Sequence[float],
    fx: Sequence[float],
    ys: Optional[Sequence[float]] = None,
    fix_a2: Optional[float] = None,
) -> ProfileSolution:
    """
    Best (a1, a2) for a fixed shift a3.

    Args:
        a3: shift (and y-coefficient when ys is given)
        xs, fx: sample abscissae and values
        ys: second variable for the bivariate family
        fix_a2: pin a2 instead of solving for it

    Raises:
        LogDomainError: if some x + a3 <= 0
        RankDeficiencyError: if the basis columns are linearly dependent
    """
    xs = np.asarray(xs, dtype=float)
    fx = np.asarray(fx, dtype=float)
    ys = None if ys is None else np.asarray(ys, dtype=float)
    design, target = _function_rows(a3, xs, fx, ys)
    return _solve(design, target, a3, fix_a2)


def shift_interval(x_min: float, x_max: float, cfg: FitConfig) -> tuple[float, float]:
    """
    Search interval (lo, hi] for a3.

    Defaults to (-x_min + 1e-6, -x_min + 10 * max(1, span)].

    Raises:
        LogDomainError: if a configured lower bound lets x_min + a3 <= 0
    """
    if cfg.shift_search is None:
        span = max(1.0, x_max - x_min)
        return -x_min + DOMAIN_MARGIN, -x_min + DEFAULT_SHIFT_SPAN * span
    lo, hi = cfg.shift_search
    if not x_min + lo > 0.0:
        raise LogDomainError(
            f"shift_search lower bound {lo} leaves x + a3 <= 0 at x = {x_min}",
            x=x_min,
            shift=lo,
        )
    return lo, hi


def _key(s: ProfileSolution) -> tuple[float, float]:
    return (s.objective, abs(s.a3))


def _profile_search(
    solve_at: Callable[[float], ProfileSolution],
    lo: float,
    hi: float,
    cfg: FitConfig,
) -> tuple[ProfileSolution, bool]:
    """Probe sweep plus golden refinement; returns the best evaluated shift."""
    cache: dict[float, ProfileSolution] = {}

    def objective(a3: float) -> float:
        if a3 not in cache:
            cache[a3] = solve_at(a3)
        return cache[a3].objective

    n = cfg.n_shift_probes
    probes = [lo + (hi - lo) * i / n for i in range(1, n + 1)]
    for a3 in probes:
        objective(a3)
    if lo < 0.0 <= hi:
        objective(0.0)

    best_probe = min((cache[a] for a in probes), key=_key)
    i = probes.index(best_probe.a3)
    left = probes[i - 1] if i > 0 else lo
    right = probes[i + 1] if i < n - 1 else hi
    golden = golden_section_minimize(objective, left, right, cfg.refine_tol)

    best = min(cache.values(), key=_key)
    converged = best.a3 < hi and math.isfinite(best.objective)
    logger.debug(
        "fitting.refined",
        probe_a3=best_probe.a3,
        probe_objective=best_probe.objective,
        golden_a3=golden.x,
        golden_objective=golden.value,
        evaluations=len(cache),
    )
    if not converged:
        logger.warning("fitting.boundary_minimum", a3=best.a3, hi=hi)
    return best, converged


def _as_columns(samples, width: int, minimum: int, label: str) -> np.ndarray:
    data = np.asarray(samples, dtype=float)
    if data.ndim != 2 or data.shape[1] != width:
        raise ParameterError(f"{label} samples must be {width}-tuples", field="samples")
    if data.shape[0] < minimum:
        raise ParameterError(
            f"{label} needs at least {minimum} samples, got {data.shape[0]}",
            field="samples",
        )
    if not np.all(np.isfinite(data)):
        raise ParameterError(f"{label} samples must be finite", field="samples")
    return data


def _pin_shift(x_min: float, lo: float) -> float:
    """Conventional shift when the data cannot identify it."""
    return 0.0 if x_min > 0.0 else lo


def _shift_unidentified(s: ProfileSolution) -> bool:
    return abs(s.a2) <= A2_ZERO_TOL * max(1.0, abs(s.a1))


def fit_function_1d(samples: Sequence[tuple[float, float]], cfg: FitConfig = FitConfig()) -> FitReport:
    """
    Least-squares fit of a1 + a2 x + a2 (x+a3) ln(x+a3) to (x, f(x)) samples.

    When the fitted a2 vanishes the shift is unidentifiable: the report sets
    a3_identified=False and pins a3 (0 if admissible, else the interval's lower end).

    Raises:
        RankDeficiencyError: when the linear subproblem is degenerate (e.g. all x equal)
        LogDomainError: when a configured shift interval leaves the log domain
    """
    data = _as_columns(samples, 2, 3, "fit_function_1d")
    xs, fx = data[:, 0], data[:, 1]
    lo, hi = shift_interval(float(xs.min()), float(xs.max()), cfg)

    best, converged = _profile_search(
        lambda a3: profile_linear(a3, xs, fx, fix_a2=cfg.fix_a2), lo, hi, cfg
    )
    identified = True
    if _shift_unidentified(best):
        identified = False
        converged = True
        fix = 0.0 if cfg.fix_a2 is None else cfg.fix_a2
        best = profile_linear(_pin_shift(float(xs.min()), lo), xs, fx, fix_a2=fix)
        logger.warning("fitting.a3_unidentified", a3=best.a3)

    params = TiedLogExpansion1D(a1=best.a1, a2=best.a2, a3=best.a3)
    rmse, peak = rms_and_max(eval_tied_1d(params, xs) - fx)
    report = FitReport(
        params=params,
        rmse=rmse,
        max_abs_err=peak,
        n_samples=int(xs.size),
        converged=converged,
        a3_identified=identified,
        objective=best.objective,
    )
    logger.info("fitting.completed", kind="function_1d", a1=params.a1, a2=params.a2,
                a3=params.a3, rmse=rmse)
    return report


def fit_function_2d(samples: Sequence[tuple[float, float, float]], cfg: FitConfig = FitConfig()) -> FitReport:
    """
    Least-squares fit of a1 + a2 x + a3 y + a2 (x+a3) ln(x+a3) to (x, y, f) samples.

    For fixed a3 the y term is a known offset, so the same profiling applies.
    The shift is only unidentified when a2 vanishes and all y are equal.

    Raises:
        RankDeficiencyError: when the linear subproblem is degenerate
    """
    data = _as_columns(samples, 3, 4, "fit_function_2d")
    xs, ys, fx = data[:, 0], data[:, 1], data[:, 2]
    lo, hi = shift_interval(float(xs.min()), float(xs.max()), cfg)

    best, converged = _profile_search(
        lambda a3: profile_linear(a3, xs, fx, ys, fix_a2=cfg.fix_a2), lo, hi, cfg
    )
    identified = True
    if _shift_unidentified(best) and np.ptp(ys) == 0.0:
        identified = False
        converged = True
        fix = 0.0 if cfg.fix_a2 is None else cfg.fix_a2
        best = profile_linear(_pin_shift(float(xs.min()), lo), xs, fx, ys, fix_a2=fix)
        logger.warning("fitting.a3_unidentified", a3=best.a3)

    params = TiedLogExpansion2D(a1=best.a1, a2=best.a2, a3=best.a3)
    rmse, peak = rms_and_max(eval_tied_2d(params, xs, ys) - fx)
    report = FitReport(
        params=params,
        rmse=rmse,
        max_abs_err=peak,
        n_samples=int(xs.size),
        converged=converged,
        a3_identified=identified,
        objective=best.objective,
    )
    logger.info("fitting.completed", kind="function_2d", a1=params.a1, a2=params.a2,
                a3=params.a3, rmse=rmse)
    return report


def _pde_rows(
    a3: float,
    equation: Equation,
    xx: np.ndarray,
    tt: np.ndarray,
    boundary: np.ndarray,
    weight: float,
):
    """Residual rows, linear in (a1, a2) with an a3-dependent offset, plus weighted boundary rows."""
    z = log_shift(xx, a3)
    if isinstance(equation, RCDParams):
        r, s2 = equation.r, equation.sigma ** 2
        c1 = np.full_like(xx, -r)
        c2 = r * xx * (2.0 + np.log(z)) + 0.5 * s2 * xx * xx / z - r * (xx + z * np.log(z))
        offset = a3 - r * a3 * tt
    else:
        c1 = np.zeros_like(xx)
        c2 = -equation.k / z
        offset = np.full_like(xx, a3)
    design = np.column_stack([c1, c2])
    target = -offset

    if weight > 0.0 and boundary.size:
        w = math.sqrt(weight)
        bx, bt, bv = boundary[:, 0], boundary[:, 1], boundary[:, 2]
        zb = log_shift(bx, a3)
        design = np.vstack([design, w * np.column_stack([np.ones_like(bx), bx + zb * np.log(zb)])])
        target = np.concatenate([target, w * (bv - a3 * bt)])
    return design, target


def fit_pde_residual(
    equation: Equation,
    grid: Grid1D,
    t_grid: Grid1D,
    boundary: Sequence[tuple[float, float, float]] = (),
    cfg: FitConfig = FitConfig(),
) -> FitReport:
    """
    Choose (a1, a2, a3) minimising the squared PDE residual over the grid
    plus bc_penalty_weight times the squared boundary mismatch.

    Args:
        equation: RCDParams or HeatParams
        grid, t_grid: residual collocation nodes
        boundary: (x, t, value) condition samples
        cfg: search settings

    Returns:
        FitReport whose rmse is the RMS PDE residual over the grid and whose
        bc_rmse is the RMS boundary mismatch (None without boundary samples)

    Raises:
        ParameterError: if bc_penalty_weight > 0 but no boundary samples are given
        RankDeficiencyError: if the design is degenerate
        LogDomainError: if the search interval leaves the log domain
    """
    weight = cfg.bc_penalty_weight
    bnd = np.asarray(boundary, dtype=float).reshape(-1, 3)
    if weight > 0.0 and bnd.shape[0] == 0:
        raise ParameterError(
            "boundary samples are required when bc_penalty_weight > 0",
            field="boundary",
        )

    tt, xx = np.meshgrid(t_grid.nodes, grid.nodes, indexing="ij")
    xx, tt = xx.ravel(), tt.ravel()
    x_min = min(grid.x_min, float(bnd[:, 0].min())) if bnd.size else grid.x_min
    x_max = max(grid.x_max, float(bnd[:, 0].max())) if bnd.size else grid.x_max
    lo, hi = shift_interval(x_min, x_max, cfg)

    def solve_at(a3: float) -> ProfileSolution:
        design, target = _pde_rows(a3, equation, xx, tt, bnd, weight)
        return _solve(design, target, a3, cfg.fix_a2)

    best, converged = _profile_search(solve_at, lo, hi, cfg)
    if not best.free[0]:
        # heat rows never involve a1; without boundary rows it stays at 0
        logger.info("fitting.a1_pinned", equation=type(equation).__name__)

    params = TiedLogExpansion2D(a1=best.a1, a2=best.a2, a3=best.a3)
    if isinstance(equation, RCDParams):
        residual = rcd_residual(params, equation, xx, tt)
    else:
        residual = heat_residual(params, equation, xx)
    rmse, peak = rms_and_max(residual)
    bc_rmse = None
    if bnd.size:
        bc_rmse, _ = rms_and_max(eval_tied_2d(params, bnd[:, 0], bnd[:, 1]) - bnd[:, 2])

    report = FitReport(
        params=params,
        rmse=rmse,
        max_abs_err=peak,
        n_samples=int(xx.size),
        converged=converged,
        objective=best.objective,
        bc_rmse=bc_rmse,
    )
    logger.info("fitting.completed", kind="pde", a1=params.a1, a2=params.a2,
                a3=params.a3, rmse=rmse, bc_rmse=bc_rmse)
    return report
