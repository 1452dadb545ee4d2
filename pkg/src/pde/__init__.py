"""PDE residuals under the tied ansatz and error metrics against reference solutions."""
from .residuals import (
    SolutionField, tied_field, numeric_field,
    generic_rcd_residual, generic_heat_residual,
    rcd_residual, heat_residual, equation_label,
    residual_sweep, compare_to_reference,
)

__all__ = [
    'SolutionField', 'tied_field', 'numeric_field',
    'generic_rcd_residual', 'generic_heat_residual',
    'rcd_residual', 'heat_residual', 'equation_label',
    'residual_sweep', 'compare_to_reference',
]
