"""Expansion families, exact derivatives and the closed-form remainder."""
from .tied import (
    eval_tied_1d, eval_tied_2d, d_dx, d_dt, d2_dx2,
    embed_tied_1d, embed_tied_2d, eval_general, eval_general_2d, log_shift,
)
from .derivation import (
    remainder_closed_form, remainder_closed_form_2d,
    expansion_from_derivation, expansion_from_derivation_2d,
    is_tied, is_tied_2d, tie_gap,
)

__all__ = [
    # Tied families
    'eval_tied_1d', 'eval_tied_2d', 'd_dx', 'd_dt', 'd2_dx2',
    'embed_tied_1d', 'embed_tied_2d', 'eval_general', 'eval_general_2d', 'log_shift',
    # Derivation
    'remainder_closed_form', 'remainder_closed_form_2d',
    'expansion_from_derivation', 'expansion_from_derivation_2d',
    'is_tied', 'is_tied_2d', 'tie_gap',
]
