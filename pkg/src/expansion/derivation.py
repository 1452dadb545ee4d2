"""
Closed-form remainder and the ansatz it produces.

Substituting the remainder
    R1(x) = f'(c) * [alpha*ln(alpha) + x - ((x-c+alpha)*ln(x-c+alpha) + c)]
into f(c) + f'(c)*(x-c) + R1(x) and collecting terms gives

    b0 = f(c) + f'(c)*(alpha*ln(alpha) - 2c)
    b1 = 2*f'(c)
    bL = -f'(c)
    s  = alpha - c

so the linear and log coefficients are not tied unless f'(c) = 0.
"""
import math

import numpy as np
from numpy.typing import ArrayLike
import structlog

from ..core.models import (
    BivariateDerivationConstants,
    DerivationConstants,
    GeneralLogAnsatz,
    GeneralLogAnsatz2D,
)
from ..core.errors import ParameterError
from .tied import Real, _unwrap, log_shift


logger = structlog.get_logger()


def _remainder(alpha: float, c: float, slope: float, x: ArrayLike) -> Real:
    xs = np.asarray(x, dtype=float)
    z = log_shift(xs - c, alpha)
    bracket = alpha * np.log(alpha) + xs - (z * np.log(z) + c)
    return _unwrap(slope * bracket)


def remainder_closed_form(d: DerivationConstants, x: ArrayLike) -> Real:
    """
    Explicit first-order remainder R1(x).

    Raises:
        LogDomainError: when x - c + alpha <= 0
    """
    return _remainder(d.alpha, d.c, d.fprime_c, x)


def remainder_closed_form_2d(d: BivariateDerivationConstants, x: ArrayLike) -> Real:
    """Bivariate remainder: the 1-D remainder in x with c1 and f_x(c1, c2); no y part."""
    return _remainder(d.alpha, d.c1, d.fx_c, x)


def expansion_from_derivation(d: DerivationConstants) -> GeneralLogAnsatz:
    """Ansatz equal to f(c) + f'(c)(x-c) + R1(x) on its domain."""
    fp = d.fprime_c
    g = GeneralLogAnsatz(
        b0=d.f_c + fp * (d.alpha * math.log(d.alpha) - 2.0 * d.c),
        b1=2.0 * fp,
        bL=-fp,
        s=d.alpha - d.c,
    )
    logger.debug("expansion.derived", c=d.c, alpha=d.alpha, tie_gap=tie_gap(g))
    return g


def expansion_from_derivation_2d(d: BivariateDerivationConstants) -> GeneralLogAnsatz2D:
    """Ansatz equal to the bivariate first-order expansion plus its x-remainder."""
    fx = d.fx_c
    return GeneralLogAnsatz2D(
        b0=d.f_c - d.fy_c * d.c2 + fx * (d.alpha * math.log(d.alpha) - 2.0 * d.c1),
        b1=2.0 * fx,
        by=d.fy_c,
        bL=-fx,
        s=d.alpha - d.c1,
    )


def tie_gap(g: GeneralLogAnsatz) -> float:
    """|b1 - bL|, zero for members of the tied family."""
    return abs(g.b1 - g.bL)


def is_tied(g: GeneralLogAnsatz, tol: float) -> bool:
    """True iff the ansatz lies in the tied family up to tol."""
    if tol < 0:
        raise ParameterError(f"tol must be >= 0, got {tol}", field="tol")
    return tie_gap(g) <= tol


def is_tied_2d(g: GeneralLogAnsatz2D, tol: float) -> bool:
    """Tied in the bivariate sense: b1 == bL and the y-coefficient equals the shift."""
    if tol < 0:
        raise ParameterError(f"tol must be >= 0, got {tol}", field="tol")
    return abs(g.b1 - g.bL) <= tol and abs(g.by - g.s) <= tol
