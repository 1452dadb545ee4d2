"""
Benchmark experiments: CN reference solutions with convergence studies,
ansatz fits scored against them, and the Monte-Carlo policy tournament.
"""
import math

import numpy as np
import structlog

from ..analysis.reporter import ReportWriter
from ..core.config import HeatBenchParams, PortfolioBenchParams, RCDBenchParams
from ..core.models import FitConfig, Grid1D, HeatParams, MarketParams, RCDParams
from ..fitting import fit_pde_residual
from ..oracles import (
    CNSolution,
    ConvergenceStudy,
    black_scholes_call,
    cn_solve_heat,
    cn_solve_rcd,
    convergence_study,
    gaussian_heat_kernel,
    merton_benchmark,
    merton_value,
    rcd_power_solution,
)
from ..pde import compare_to_reference
from ..portfolio import DEFAULT_POLICIES, create_all_policies, policy_tournament
from .audits import fit_row, fit_summary
from .registry import (
    CONVERGENCE_HEADER,
    FIT_REPORT_HEADER,
    MC_REPORT_HEADER,
    RESIDUAL_REPORT_HEADER,
    Summary,
    experiment,
)


logger = structlog.get_logger()


def convergence_rows(study: ConvergenceStudy) -> list[tuple]:
    return [
        (i, level.n_x, level.n_t, level.max_abs_diff, study.observed_order)
        for i, level in enumerate(study.levels)
    ]


def solution_edge_samples(solution: CNSolution, row: int) -> list[tuple[float, float, float]]:
    """Full time row `row` of a solution plus both x edges at every other time."""
    xs, ts, v = solution.grid.nodes, solution.t_grid.nodes, solution.values
    rows = [(float(x), float(ts[row]), float(v[row, i])) for i, x in enumerate(xs)]
    for j, t in enumerate(ts):
        if j == row % ts.size:
            continue
        rows.append((float(xs[0]), float(t), float(v[j, 0])))
        rows.append((float(xs[-1]), float(t), float(v[j, -1])))
    return rows


def _max_error(solution: CNSolution, exact) -> float:
    tt, xx = np.meshgrid(solution.t_grid.nodes, solution.grid.nodes, indexing="ij")
    return float(np.max(np.abs(solution.values - exact(xx, tt))))


def _fit_against(solution: CNSolution, equation, row: int, weight: float, writer: ReportWriter) -> Summary:
    """Fit the ansatz with the solution's edges as boundary data and compare on its grid."""
    boundary = solution_edge_samples(solution, row)
    report = fit_pde_residual(
        equation, solution.grid, solution.t_grid, boundary,
        FitConfig(bc_penalty_weight=weight),
    )
    versus = compare_to_reference(report.params, solution, label="cn")
    writer.write_csv("fit_report.csv", FIT_REPORT_HEADER, [fit_row(report)])
    writer.write_csv("residual_report.csv", RESIDUAL_REPORT_HEADER, versus.samples)
    return {
        **{f"ansatz_{k}": v for k, v in fit_summary(report).items()},
        "ansatz_bc_rmse": report.bc_rmse,
        "ansatz_rms_error_vs_reference": versus.rms_error_vs_reference,
        "ansatz_max_abs_error_vs_reference": versus.max_abs_residual,
    }


@experiment("heat-bench")
def heat_bench(params: HeatBenchParams, writer: ReportWriter, seed: int) -> Summary:
    """CN heat solver on the Gaussian kernel, its observed order, and the fitted ansatz against it."""
    grid = Grid1D(x_min=params.x_min, x_max=params.x_max, n=params.n_x)
    t_grid = Grid1D(x_min=0.0, x_max=params.t_max, n=params.n_t)

    def exact(x, t):
        return gaussian_heat_kernel(params.k, params.t0, x, t)

    def solve(g: Grid1D, tg: Grid1D) -> CNSolution:
        return cn_solve_heat(
            params.k,
            lambda x: float(exact(x, tg.x_min)),
            (lambda t: float(exact(g.x_min, t)), lambda t: float(exact(g.x_max, t))),
            g,
            tg,
        )

    solution = solve(grid, t_grid)
    study = convergence_study(solve, grid, t_grid)
    writer.write_csv("convergence.csv", CONVERGENCE_HEADER, convergence_rows(study))

    summary = {
        "cn_max_error_vs_exact": _max_error(solution, exact),
        "observed_order": study.observed_order,
    }
    summary.update(_fit_against(solution, HeatParams(k=params.k), 0, params.bc_penalty_weight, writer))
    logger.info("experiments.heat_bench", **summary)
    return summary


def _rcd_setup(params: RCDBenchParams):
    """(exact solution, Dirichlet boundary or None, rannacher steps) for the chosen terminal data."""
    if params.terminal == "power":
        def exact(x, t):
            return rcd_power_solution(params.r, params.sigma, params.power, params.T, x, t)
        return exact, True, 0
    if params.terminal == "linear":
        def exact(x, t):
            return np.asarray(x, dtype=float) + 0.0 * np.asarray(t, dtype=float)
        return exact, False, 0

    def exact(x, t):
        return black_scholes_call(params.r, params.sigma, params.strike, params.T, x, t)
    return exact, False, params.rannacher_steps


@experiment("rcd-bench")
def rcd_bench(params: RCDBenchParams, writer: ReportWriter, seed: int) -> Summary:
    """CN reaction-convection-diffusion solver, its observed order, and the fitted ansatz against it."""
    grid = Grid1D(x_min=params.x_min, x_max=params.x_max, n=params.n_x)
    t_grid = Grid1D(x_min=0.0, x_max=params.T, n=params.n_t)
    exact, dirichlet, rannacher = _rcd_setup(params)

    def solve(g: Grid1D, tg: Grid1D) -> CNSolution:
        boundary = None
        if dirichlet:
            boundary = (lambda t: float(exact(g.x_min, t)), lambda t: float(exact(g.x_max, t)))
        return cn_solve_rcd(
            params.r, params.sigma, lambda x: float(exact(x, params.T)), g, tg,
            boundary=boundary, rannacher_steps=rannacher,
        )

    solution = solve(grid, t_grid)
    study = convergence_study(solve, grid, t_grid)
    writer.write_csv("convergence.csv", CONVERGENCE_HEADER, convergence_rows(study))

    summary = {
        "terminal": params.terminal,
        "cn_max_error_vs_exact": _max_error(solution, exact),
        "observed_order": study.observed_order,
    }
    equation = RCDParams(r=params.r, sigma=params.sigma)
    summary.update(_fit_against(solution, equation, -1, params.bc_penalty_weight, writer))
    logger.info("experiments.rcd_bench", **summary)
    return summary


@experiment("portfolio-bench")
def portfolio_bench(params: PortfolioBenchParams, writer: ReportWriter, seed: int) -> Summary:
    """Common-random-number tournament of Merton, riskless and ansatz policies."""
    m = MarketParams(mu=params.mu, r=params.r, sigma=params.sigma, T=params.T, x0=params.x0)
    overrides = {
        "merton": {"gamma": params.merton_gamma},
        "ansatz": {"a1": params.ansatz_a1, "a2": params.ansatz_a2, "a3": params.ansatz_a3},
    }
    configs = [{**c, **overrides.get(c["type"], {})} for c in DEFAULT_POLICIES]
    policies = create_all_policies(configs)
    estimates = policy_tournament(
        m, policies, params.n_paths, params.n_steps, seed, params.utility, params.gamma
    )

    writer.write_csv("mc_report.csv", MC_REPORT_HEADER, [
        (e.label, e.n_paths, e.n_steps, e.seed, e.mean, e.std_err, e.bankrupt_paths)
        for e in estimates
    ])

    by_id = {e.label: e for e in estimates}
    merton, ansatz = by_id["merton"], by_id["ansatz"]
    summary: Summary = {}
    for e in estimates:
        summary[f"{e.label}.mean"] = e.mean
        summary[f"{e.label}.std_err"] = e.std_err
    summary["merton_log_closed_form"] = merton_value(m.mu, m.r, m.sigma, 1.0, m.T, m.x0)
    if params.utility == "crra":
        summary["merton_crra_closed_form"] = merton_value(m.mu, m.r, m.sigma, params.gamma, m.T, m.x0)
    bench = merton_benchmark(m.mu, m.r, m.sigma, params.merton_gamma, m.T, m.x0)
    summary["merton_fraction"] = bench.fraction
    summary["merton_growth_rate"] = bench.growth_rate
    summary["ansatz_minus_merton"] = ansatz.mean - merton.mean
    summary["combined_std_err"] = math.hypot(ansatz.std_err, merton.std_err)
    summary["ansatz_domain_violations"] = ansatz.domain_violations
    summary["ansatz_concavity_violation"] = ansatz.concavity_violation
    summary["bankrupt_paths"] = sum(e.bankrupt_paths for e in estimates)
    logger.info("experiments.portfolio_bench", **summary)
    return summary
