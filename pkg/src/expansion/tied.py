"""
Tied log-augmented expansions.
Evaluation and exact derivatives of a1 + a2*x [+ a3*y] + a2*(x+a3)*ln(x+a3).

All evaluators accept a scalar or a numpy array; scalars come back as float.
"""
from typing import Union

import numpy as np
from numpy.typing import ArrayLike

from ..core.errors import LogDomainError
from ..core.models import (
    GeneralLogAnsatz,
    GeneralLogAnsatz2D,
    TiedExpansion,
    TiedLogExpansion1D,
    TiedLogExpansion2D,
)

Real = Union[float, np.ndarray]


def _unwrap(value: np.ndarray) -> Real:
    return float(value) if np.ndim(value) == 0 else value


def log_shift(x: ArrayLike, shift: float) -> np.ndarray:
    """
    Return x + shift after checking the strict log domain.

    Raises:
        LogDomainError: if any x + shift <= 0 or any input is non-finite
    """
    xs = np.asarray(x, dtype=float)
    shifted = xs + shift
    bad = ~np.isfinite(shifted) | (shifted <= 0.0)
    if np.any(bad):
        idx = tuple(int(i) for i in np.argwhere(bad)[0]) if xs.ndim else ()
        x_bad = float(xs[idx]) if xs.ndim else float(xs)
        raise LogDomainError(
            f"log domain violated: x + shift = {x_bad} + {shift} <= 0",
            index=idx or None,
            x=x_bad,
            shift=shift,
        )
    return shifted


def eval_tied_1d(e: TiedLogExpansion1D, x: ArrayLike) -> Real:
    """a1 + a2*x + a2*(x+a3)*ln(x+a3)."""
    xs = np.asarray(x, dtype=float)
    z = log_shift(xs, e.a3)
    return _unwrap(e.a1 + e.a2 * xs + e.a2 * z * np.log(z))


def eval_tied_2d(e: TiedLogExpansion2D, x: ArrayLike, y: ArrayLike) -> Real:
    """a1 + a2*x + a3*y + a2*(x+a3)*ln(x+a3)."""
    xs = np.asarray(x, dtype=float)
    ys = np.asarray(y, dtype=float)
    z = log_shift(xs, e.a3)
    return _unwrap(e.a1 + e.a2 * xs + e.a3 * ys + e.a2 * z * np.log(z))


def d_dx(e: TiedExpansion, x: ArrayLike) -> Real:
    """V_x = a2*(2 + ln(x+a3))."""
    z = log_shift(x, e.a3)
    return _unwrap(e.a2 * (2.0 + np.log(z)))


def d_dt(e: TiedLogExpansion2D) -> float:
    """V_t = a3, constant in x and t."""
    return float(e.a3)


def d2_dx2(e: TiedExpansion, x: ArrayLike) -> Real:
    """V_xx = a2/(x+a3)."""
    z = log_shift(x, e.a3)
    return _unwrap(e.a2 / z)


def embed_tied_1d(e: TiedLogExpansion1D) -> GeneralLogAnsatz:
    """Place a tied expansion in the untied family (b1 = bL = a2)."""
    return GeneralLogAnsatz(b0=e.a1, b1=e.a2, bL=e.a2, s=e.a3)


def embed_tied_2d(e: TiedLogExpansion2D) -> GeneralLogAnsatz2D:
    return GeneralLogAnsatz2D(b0=e.a1, b1=e.a2, by=e.a3, bL=e.a2, s=e.a3)


def eval_general(g: GeneralLogAnsatz, x: ArrayLike) -> Real:
    """b0 + b1*x + bL*(x+s)*ln(x+s)."""
    xs = np.asarray(x, dtype=float)
    z = log_shift(xs, g.s)
    return _unwrap(g.b0 + g.b1 * xs + g.bL * z * np.log(z))


def eval_general_2d(g: GeneralLogAnsatz2D, x: ArrayLike, y: ArrayLike) -> Real:
    xs = np.asarray(x, dtype=float)
    ys = np.asarray(y, dtype=float)
    z = log_shift(xs, g.s)
    return _unwrap(g.b0 + g.b1 * xs + g.by * ys + g.bL * z * np.log(z))
