"""Independent oracles: quadrature, finite differences, CN solvers, Merton benchmark."""
from .quadrature import (
    QuadratureResult, adaptive_simpson, double_quadrature_remainder,
    remainder_quadrature_sweep, inner_integral_closed_form,
)
from .differences import central_diff, central_second_diff
from .solvers import (
    CNSolution, ConvergenceLevel, ConvergenceStudy,
    cn_solve_heat, cn_solve_rcd, bilinear_sample,
    self_convergence_order, convergence_study,
)
from .exact import (
    gaussian_heat_kernel, power_growth_rate, rcd_power_solution, black_scholes_call,
)
from .merton import (
    MertonBenchmark, merton_fraction, merton_policy, merton_value,
    merton_benchmark, brute_force_hjb_max,
)

__all__ = [
    'QuadratureResult', 'adaptive_simpson', 'double_quadrature_remainder',
    'remainder_quadrature_sweep', 'inner_integral_closed_form',
    'central_diff', 'central_second_diff',
    'CNSolution', 'ConvergenceLevel', 'ConvergenceStudy',
    'cn_solve_heat', 'cn_solve_rcd', 'bilinear_sample',
    'self_convergence_order', 'convergence_study',
    'gaussian_heat_kernel', 'power_growth_rate', 'rcd_power_solution', 'black_scholes_call',
    'MertonBenchmark', 'merton_fraction', 'merton_policy', 'merton_value',
    'merton_benchmark', 'brute_force_hjb_max',
]
