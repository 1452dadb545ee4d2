"""
Central finite differences used to audit analytic derivatives.
"""
from typing import Callable

from ..core.errors import ParameterError


def central_diff(fn: Callable[[float], float], x: float, h: float = 1e-5) -> float:
    """(fn(x+h) - fn(x-h)) / (2h); domain errors from fn propagate."""
    if not h > 0.0:
        raise ParameterError(f"step h must be > 0, got {h}", field="h")
    return (fn(x + h) - fn(x - h)) / (2.0 * h)


def central_second_diff(fn: Callable[[float], float], x: float, h: float = 1e-3) -> float:
    """(fn(x+h) - 2 fn(x) + fn(x-h)) / h^2."""
    if not h > 0.0:
        raise ParameterError(f"step h must be > 0, got {h}", field="h")
    return (fn(x + h) - 2.0 * fn(x) + fn(x - h)) / (h * h)
