"""
Optimal holding and HJB residual of the tied ansatz.

With V_x = a2 (2 + ln(x+a3)) and V_xx = a2/(x+a3) the first-order condition
pi* = -(mu - r) V_x / (sigma^2 V_xx) loses a2 and reads
    pi* = -(mu - r) (x+a3) (2 + ln(x+a3)) / sigma^2.
"""
import numpy as np
from numpy.typing import ArrayLike

from ..core.errors import DegenerateAnsatzError
from ..core.models import MarketParams, TiedLogExpansion2D
from ..expansion import d2_dx2, d_dx, log_shift


def _check_degenerate(e: TiedLogExpansion2D) -> None:
    if e.a2 == 0.0:
        raise DegenerateAnsatzError(
            "a2 = 0 makes V_xx vanish; the optimal holding is undefined",
            a1=e.a1,
            a3=e.a3,
        )


def optimal_holding(e: TiedLogExpansion2D, mu, r, sigma, x: ArrayLike):
    """Vectorised pi* for per-step coefficients; raises on the log domain."""
    z = log_shift(x, e.a3)
    return -(mu - r) * z * (2.0 + np.log(z)) / (sigma * sigma)


def ansatz_optimal_pi(e: TiedLogExpansion2D, m: MarketParams, x: ArrayLike):
    """
    Simplified optimal holding -(mu - r)(x+a3)(2 + ln(x+a3))/sigma^2.

    Raises:
        DegenerateAnsatzError: if a2 = 0
        LogDomainError: if x + a3 <= 0
    """
    _check_degenerate(e)
    out = optimal_holding(e, m.mu, m.r, m.sigma, x)
    return float(out) if np.ndim(out) == 0 else out


def unsimplified_optimal_pi(e: TiedLogExpansion2D, m: MarketParams, x: ArrayLike):
    """The quotient -(mu - r) V_x / (sigma^2 V_xx) before cancelling a2."""
    _check_degenerate(e)
    return -(m.mu - m.r) * d_dx(e, x) / (m.sigma ** 2 * d2_dx2(e, x))


def hjb_residual(e: TiedLogExpansion2D, m: MarketParams, pi: ArrayLike, x: ArrayLike, t: ArrayLike = 0.0):
    """
    a3 + a2 (r x + pi (mu - r)) (2 + ln(x+a3)) + 1/2 a2 pi^2 sigma^2 / (x+a3).

    t is accepted for the (x, t) calling convention; the constant-coefficient
    market makes the residual time-independent.

    Raises:
        LogDomainError: if x + a3 <= 0
    """
    xs = np.asarray(x, dtype=float)
    pis = np.asarray(pi, dtype=float)
    z = log_shift(xs, e.a3)
    out = (
        e.a3
        + e.a2 * (m.r * xs + pis * (m.mu - m.r)) * (2.0 + np.log(z))
        + 0.5 * e.a2 * pis * pis * m.sigma ** 2 / z
    )
    out = out + 0.0 * np.asarray(t, dtype=float)
    return float(out) if np.ndim(out) == 0 else out
