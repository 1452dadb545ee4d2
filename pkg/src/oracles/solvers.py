"""
Crank-Nicolson reference solvers.

Heat equation V_t - k V_xx = 0 is marched forward from initial data.
The reaction-convection-diffusion equation
    V_t + r x V_x + 1/2 sigma^2 x^2 V_xx - r V = 0
is marched backward from terminal data in tau = T - t.

Both use central differences in x on a uniform grid and a tridiagonal solve
per step (scipy.linalg.solve_banded). Boundaries are Dirichlet when a
boundary function of t is supplied, otherwise the linearity condition
V_xx = 0 (V_0 = 2V_1 - V_2) is eliminated into the first/last interior row.
"""
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.linalg import solve_banded
import structlog

from ..core.errors import GridMismatchError, ParameterError, SolverInstabilityError
from ..core.models import Grid1D


logger = structlog.get_logger()

ScalarFn = Callable[[float], float]
Boundary = tuple[Optional[ScalarFn], Optional[ScalarFn]]


@dataclass(frozen=True)
class CNSolution:
    """Node values on grid x t_grid; row j is time t_grid.nodes[j]."""
    grid: Grid1D
    t_grid: Grid1D
    values: np.ndarray
    scheme_order: tuple[int, int] = (2, 2)

    def __post_init__(self):
        if self.values.shape != (self.t_grid.n, self.grid.n):
            raise ParameterError(
                f"values shape {self.values.shape} does not match grids "
                f"({self.t_grid.n}, {self.grid.n})"
            )


@dataclass(frozen=True)
class ConvergenceLevel:
    n_x: int
    n_t: int
    max_abs_diff: Optional[float]  # vs the next finer level, on the coarsest nodes


@dataclass(frozen=True)
class ConvergenceStudy:
    """Self-convergence of a solver under uniform 2x refinement in x and t."""
    levels: list[ConvergenceLevel] = field(default_factory=list)
    observed_order: float = float("nan")


def _sample(fn: ScalarFn, nodes: np.ndarray) -> np.ndarray:
    return np.array([fn(float(x)) for x in nodes], dtype=float)


def _check_finite(values: np.ndarray, step: int, solver: str) -> None:
    if not np.all(np.isfinite(values)):
        raise SolverInstabilityError(
            f"{solver}: non-finite values after step {step}", step=step
        )


def _march(
    lower: np.ndarray,
    diag: np.ndarray,
    upper: np.ndarray,
    v0: np.ndarray,
    times: np.ndarray,
    boundary_at: Callable[[float], tuple[Optional[float], Optional[float]]],
    solver: str,
    rannacher_steps: int = 0,
) -> np.ndarray:
    """
    Theta-march dV/ds = L V over the increasing `times`, L tridiagonal on interior nodes.

    The first `rannacher_steps` intervals are each replaced by two
    backward-Euler half-steps.
    """
    out = np.empty((times.size, v0.size))
    out[0] = v0
    v = v0.copy()

    def one_step(v, s_new, ds, theta):
        left, right = boundary_at(s_new)
        lv = lower * v[:-2] + diag * v[1:-1] + upper * v[2:]
        rhs = v[1:-1] + (1.0 - theta) * ds * lv

        a_l = -theta * ds * lower
        a_d = 1.0 - theta * ds * diag
        a_u = -theta * ds * upper
        if left is None:
            a_d[0] = 1.0 - theta * ds * (diag[0] + 2.0 * lower[0])
            a_u[0] = -theta * ds * (upper[0] - lower[0])
        else:
            rhs[0] += theta * ds * lower[0] * left
        if right is None:
            a_d[-1] = 1.0 - theta * ds * (diag[-1] + 2.0 * upper[-1])
            a_l[-1] = -theta * ds * (lower[-1] - upper[-1])
        else:
            rhs[-1] += theta * ds * upper[-1] * right

        m = rhs.size
        ab = np.zeros((3, m))
        ab[0, 1:] = a_u[:-1]
        ab[1, :] = a_d
        ab[2, :-1] = a_l[1:]
        inner = solve_banded((1, 1), ab, rhs)

        new = np.empty_like(v)
        new[1:-1] = inner
        new[0] = 2.0 * inner[0] - inner[1] if left is None else left
        new[-1] = 2.0 * inner[-1] - inner[-2] if right is None else right
        return new

    for j in range(times.size - 1):
        ds = times[j + 1] - times[j]
        if j < rannacher_steps:
            v = one_step(v, times[j] + 0.5 * ds, 0.5 * ds, 1.0)
            v = one_step(v, times[j + 1], 0.5 * ds, 1.0)
        else:
            v = one_step(v, times[j + 1], ds, 0.5)
        _check_finite(v, j + 1, solver)
        out[j + 1] = v
    return out


def _check_grid(grid: Grid1D) -> None:
    if grid.n < 4:
        raise ParameterError(f"solver grids need at least 4 space nodes, got {grid.n}", field="n")


def cn_solve_heat(
    k: float,
    initial: ScalarFn,
    boundary: Boundary,
    grid: Grid1D,
    t_grid: Grid1D,
) -> CNSolution:
    """
    Solve V_t = k V_xx forward in time from V(x, t_grid.x_min) = initial(x).

    Args:
        k: diffusivity (> 0)
        initial: initial condition
        boundary: (left(t), right(t)); None on a side selects the linearity condition
        grid: space grid
        t_grid: time grid, marched from x_min to x_max

    Raises:
        SolverInstabilityError: if the solution becomes non-finite
    """
    if not k > 0.0:
        raise ParameterError(f"k must be > 0, got {k}", field="k")
    _check_grid(grid)

    x = grid.nodes
    dx = grid.step
    m = grid.n - 2
    coef = k / (dx * dx)
    lower = np.full(m, coef)
    diag = np.full(m, -2.0 * coef)
    upper = np.full(m, coef)

    left_fn, right_fn = boundary

    def boundary_at(t):
        return (
            None if left_fn is None else left_fn(t),
            None if right_fn is None else right_fn(t),
        )

    v0 = _sample(initial, x)
    lb, rb = boundary_at(t_grid.x_min)
    if lb is not None:
        v0[0] = lb
    if rb is not None:
        v0[-1] = rb
    values = _march(lower, diag, upper, v0, t_grid.nodes, boundary_at, "cn_heat")

    logger.debug("oracles.cn_heat.solved", n_x=grid.n, n_t=t_grid.n, k=k)
    return CNSolution(grid=grid, t_grid=t_grid, values=values)


def cn_solve_rcd(
    r: float,
    sigma: float,
    terminal: ScalarFn,
    grid: Grid1D,
    t_grid: Grid1D,
    boundary: Optional[Boundary] = None,
    rannacher_steps: int = 0,
) -> CNSolution:
    """
    Solve V_t + r x V_x + 1/2 sigma^2 x^2 V_xx - r V = 0 backward from V(x, T) = terminal(x).

    T is t_grid.x_max. Boundaries default to the linearity condition on both
    sides; pass (left(t), right(t)) for Dirichlet values where an exact
    solution is known.

    Raises:
        SolverInstabilityError: if the solution becomes non-finite
    """
    if not sigma > 0.0:
        raise ParameterError(f"sigma must be > 0, got {sigma}", field="sigma")
    if not grid.x_min > 0.0:
        raise ParameterError(f"grid.x_min must be > 0, got {grid.x_min}", field="x_min")
    if rannacher_steps < 0:
        raise ParameterError("rannacher_steps must be >= 0", field="rannacher_steps")
    _check_grid(grid)

    x = grid.nodes
    dx = grid.step
    xi = x[1:-1]
    diffusion = 0.5 * sigma * sigma * xi * xi / (dx * dx)
    convection = r * xi / (2.0 * dx)
    lower = diffusion - convection
    diag = -2.0 * diffusion - r
    upper = diffusion + convection

    T = t_grid.x_max
    # march in tau = T - t over the reversed time nodes
    t_nodes = t_grid.nodes
    taus = T - t_nodes[::-1]
    left_fn, right_fn = boundary if boundary is not None else (None, None)

    def boundary_at(tau):
        t = T - tau
        return (
            None if left_fn is None else left_fn(t),
            None if right_fn is None else right_fn(t),
        )

    v0 = _sample(terminal, x)
    lb, rb = boundary_at(0.0)
    if lb is not None:
        v0[0] = lb
    if rb is not None:
        v0[-1] = rb
    marched = _march(lower, diag, upper, v0, taus, boundary_at, "cn_rcd", rannacher_steps)

    logger.debug("oracles.cn_rcd.solved", n_x=grid.n, n_t=t_grid.n, r=r, sigma=sigma)
    return CNSolution(grid=grid, t_grid=t_grid, values=marched[::-1].copy())


def bilinear_sample(solution: CNSolution, xs: Sequence[float], ts: Sequence[float]) -> np.ndarray:
    """
    Bilinear interpolation of a solution; returns shape (len(ts), len(xs)).

    Raises:
        GridMismatchError: if any query lies outside the solution extents
    """
    xs = np.asarray(xs, dtype=float)
    ts = np.asarray(ts, dtype=float)
    g, tg = solution.grid, solution.t_grid
    slack_x = 1e-12 * max(1.0, abs(g.x_min), abs(g.x_max))
    slack_t = 1e-12 * max(1.0, abs(tg.x_min), abs(tg.x_max))
    if xs.min() < g.x_min - slack_x or xs.max() > g.x_max + slack_x:
        raise GridMismatchError(
            f"x extent [{xs.min()}, {xs.max()}] exceeds reference [{g.x_min}, {g.x_max}]"
        )
    if ts.min() < tg.x_min - slack_t or ts.max() > tg.x_max + slack_t:
        raise GridMismatchError(
            f"t extent [{ts.min()}, {ts.max()}] exceeds reference [{tg.x_min}, {tg.x_max}]"
        )
    along_x = np.array([np.interp(xs, g.nodes, row) for row in solution.values])
    return np.array([np.interp(ts, tg.nodes, col) for col in along_x.T]).T


def self_convergence_order(coarse: CNSolution, mid: CNSolution, fine: CNSolution) -> ConvergenceStudy:
    """Observed order log2(|u_h - u_h/2| / |u_h/2 - u_h/4|) on the coarse nodes."""
    mid_c = mid.values[::2, ::2]
    fine_c = fine.values[::4, ::4]
    if mid_c.shape != coarse.values.shape or fine_c.shape != coarse.values.shape:
        raise GridMismatchError("convergence levels are not nested 2x refinements")
    e1 = float(np.max(np.abs(coarse.values - mid_c)))
    e2 = float(np.max(np.abs(mid_c - fine_c)))
    order = math.log2(e1 / e2) if e1 > 0.0 and e2 > 0.0 else float("nan")
    levels = [
        ConvergenceLevel(coarse.grid.n, coarse.t_grid.n, e1),
        ConvergenceLevel(mid.grid.n, mid.t_grid.n, e2),
        ConvergenceLevel(fine.grid.n, fine.t_grid.n, None),
    ]
    return ConvergenceStudy(levels=levels, observed_order=order)


def convergence_study(
    solve: Callable[[Grid1D, Grid1D], CNSolution],
    grid: Grid1D,
    t_grid: Grid1D,
) -> ConvergenceStudy:
    """Run `solve` on three nested grids and measure the observed order."""
    solutions = [solve(grid, t_grid)]
    for _ in range(2):
        prev = solutions[-1]
        solutions.append(solve(prev.grid.refined(), prev.t_grid.refined()))
    study = self_convergence_order(*solutions)
    logger.info("oracles.convergence", order=study.observed_order,
                finest=(solutions[-1].grid.n, solutions[-1].t_grid.n))
    return study
