"""Profiled least-squares fitting of the tied families."""
from .golden import GoldenResult, golden_section_minimize
from .profiled import (
    ProfileSolution, profile_linear, shift_interval,
    fit_function_1d, fit_function_2d, fit_pde_residual,
)

__all__ = [
    # Line search
    'GoldenResult', 'golden_section_minimize',
    # Fits
    'ProfileSolution', 'profile_linear', 'shift_interval',
    'fit_function_1d', 'fit_function_2d', 'fit_pde_residual',
]
