"""
PDE residuals under the tied ansatz.

Substituting V_x = a2 (2 + ln(x+a3)), V_t = a3 and V_xx = a2/(x+a3) turns
    V_t + r x V_x + 1/2 sigma^2 x^2 V_xx - r V = 0
into the non-differential equation
    a3 + r x a2 (2 + ln(x+a3)) + 1/2 a2 sigma^2 x^2/(x+a3) - r V = 0
and the heat equation V_t - k V_xx = 0 into a3 - k a2/(x+a3) = 0.

The generic evaluators take any SolutionField, so exact solutions and
finite-difference fields go through the same operator.
"""
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from numpy.typing import ArrayLike
import structlog

from ..analysis.metrics import rms_and_max, subsample
from ..core.errors import LogDomainError
from ..core.models import Equation, Grid1D, HeatParams, RCDParams, ResidualReport, TiedLogExpansion2D
from ..expansion import d2_dx2, d_dt, d_dx, eval_tied_2d, log_shift
from ..oracles.differences import central_diff, central_second_diff
from ..oracles.solvers import CNSolution, bilinear_sample


logger = structlog.get_logger()

FieldFn = Callable[[float, float], float]


@dataclass(frozen=True)
class SolutionField:
    """A candidate solution V(x, t) with its three derivatives."""
    value: FieldFn
    dt: FieldFn
    dx: FieldFn
    dxx: FieldFn


def tied_field(e: TiedLogExpansion2D) -> SolutionField:
    """Analytic field of the tied ansatz with t in the y slot."""
    return SolutionField(
        value=lambda x, t: eval_tied_2d(e, x, t),
        dt=lambda x, t: d_dt(e) + 0.0 * np.asarray(x, dtype=float),
        dx=lambda x, t: d_dx(e, x),
        dxx=lambda x, t: d2_dx2(e, x),
    )


def numeric_field(fn: FieldFn, h: float = 1e-5, h2: float = 1e-3) -> SolutionField:
    """Field whose derivatives are central differences of fn (scalar points)."""
    return SolutionField(
        value=fn,
        dt=lambda x, t: central_diff(lambda s: fn(x, s), t, h),
        dx=lambda x, t: central_diff(lambda s: fn(s, t), x, h),
        dxx=lambda x, t: central_second_diff(lambda s: fn(s, t), x, h2),
    )


def generic_rcd_residual(f: SolutionField, p: RCDParams, x: ArrayLike, t: ArrayLike):
    """V_t + r x V_x + 1/2 sigma^2 x^2 V_xx - r V for any field."""
    return (
        f.dt(x, t)
        + p.r * x * f.dx(x, t)
        + 0.5 * p.sigma ** 2 * x * x * f.dxx(x, t)
        - p.r * f.value(x, t)
    )


def generic_heat_residual(f: SolutionField, p: HeatParams, x: ArrayLike, t: ArrayLike):
    """V_t - k V_xx for any field."""
    return f.dt(x, t) - p.k * f.dxx(x, t)


def rcd_residual(e: TiedLogExpansion2D, p: RCDParams, x: ArrayLike, t: ArrayLike):
    """
    Transformed non-differential form; zero iff the ansatz satisfies the PDE at (x, t).

    Raises:
        LogDomainError: when x + a3 <= 0
    """
    xs = np.asarray(x, dtype=float)
    z = log_shift(xs, e.a3)
    out = (
        e.a3
        + p.r * xs * e.a2 * (2.0 + np.log(z))
        + 0.5 * e.a2 * p.sigma ** 2 * xs * xs / z
        - p.r * eval_tied_2d(e, xs, t)
    )
    return float(out) if np.ndim(out) == 0 else out


def heat_residual(e: TiedLogExpansion2D, p: HeatParams, x: ArrayLike):
    """a3 - k a2/(x+a3), the heat equation after substitution."""
    z = log_shift(x, e.a3)
    out = e.a3 - p.k * e.a2 / z
    return float(out) if np.ndim(out) == 0 else out


def equation_label(equation: Equation) -> str:
    return "rcd" if isinstance(equation, RCDParams) else "heat"


def _node_rows(xx: np.ndarray, tt: np.ndarray, vals: np.ndarray) -> list[tuple[float, float, float]]:
    rows = list(zip(xx.ravel().tolist(), tt.ravel().tolist(), vals.ravel().tolist()))
    return subsample(rows)


def _guard_nodes(e: TiedLogExpansion2D, grid: Grid1D) -> np.ndarray:
    xs = grid.nodes
    try:
        log_shift(xs, e.a3)
    except LogDomainError as exc:
        i = exc.index[0] if exc.index else 0
        raise LogDomainError(
            f"grid node x[{i}] = {xs[i]} violates x + a3 > 0 (a3 = {e.a3})",
            index=(i,),
            x=float(xs[i]),
        ) from exc
    return xs


def residual_sweep(
    e: TiedLogExpansion2D,
    equation: Equation,
    grid: Grid1D,
    t_grid: Grid1D,
) -> ResidualReport:
    """
    Residual at every (x, t) node, aggregated into rms and max.

    Raises:
        LogDomainError: naming the first offending x node
    """
    xs = _guard_nodes(e, grid)
    tt, xx = np.meshgrid(t_grid.nodes, xs, indexing="ij")
    if isinstance(equation, RCDParams):
        vals = rcd_residual(e, equation, xx, tt)
    else:
        vals = np.broadcast_to(heat_residual(e, equation, xs), xx.shape)

    rms_val, max_val = rms_and_max(vals)
    report = ResidualReport(
        equation=equation_label(equation),
        n_x=grid.n,
        n_t=t_grid.n,
        rms_residual=rms_val,
        max_abs_residual=max_val,
        samples=_node_rows(xx, tt, np.asarray(vals)),
    )
    logger.debug("pde.residual_sweep", equation=report.equation,
                 rms=report.rms_residual, max=report.max_abs_residual)
    return report


def compare_to_reference(
    e: TiedLogExpansion2D,
    ref: CNSolution,
    grid: Optional[Grid1D] = None,
    t_grid: Optional[Grid1D] = None,
    label: str = "reference",
) -> ResidualReport:
    """
    Error e(x, t) - ref(x, t) over the reference grid.

    With grid/t_grid the reference is interpolated bilinearly onto them.

    Raises:
        GridMismatchError: if the requested grid leaves the reference extents
        LogDomainError: if the ansatz is undefined on a node
    """
    grid = grid or ref.grid
    t_grid = t_grid or ref.t_grid
    xs = _guard_nodes(e, grid)
    ts = t_grid.nodes
    if grid == ref.grid and t_grid == ref.t_grid:
        ref_vals = ref.values
    else:
        ref_vals = bilinear_sample(ref, xs, ts)
    tt, xx = np.meshgrid(ts, xs, indexing="ij")
    diff = eval_tied_2d(e, xx, tt) - ref_vals
    err, peak = rms_and_max(diff)
    return ResidualReport(
        equation=label,
        n_x=grid.n,
        n_t=t_grid.n,
        rms_residual=err,
        max_abs_residual=peak,
        rms_error_vs_reference=err,
        samples=_node_rows(xx, tt, diff),
    )
