"""
Merton benchmark and brute-force HJB maximisation.

The continuous-time Kelly fraction (mu - r)/sigma^2 is the log-utility
Merton policy; CRRA investors scale it by 1/gamma.
"""
import math
from dataclasses import dataclass

import numpy as np

from ..core.errors import ConcavityError, ParameterError
from ..core.models import Grid1D


@dataclass
class MertonBenchmark:
    """Closed-form optimum for a constant-coefficient market."""
    fraction: float          # optimal proportion of wealth in the risky asset
    holding: float           # dollar amount at the initial wealth
    growth_rate: float       # r + (mu - r)^2 / (2 gamma sigma^2)
    expected_utility: float  # closed-form E[U(X_T)] under the optimum
    reasoning: str


def _check_market(sigma: float, gamma: float) -> None:
    if not sigma > 0.0:
        raise ParameterError(f"sigma must be > 0, got {sigma}", field="sigma")
    if not gamma > 0.0:
        raise ParameterError(f"gamma must be > 0, got {gamma}", field="gamma")


def merton_fraction(mu: float, r: float, sigma: float, gamma: float = 1.0) -> float:
    """
    Optimal risky proportion (mu - r) / (gamma sigma^2).

    gamma = 1 is the continuous Kelly criterion.
    """
    _check_market(sigma, gamma)
    return (mu - r) / (gamma * sigma * sigma)


def merton_policy(mu: float, r: float, sigma: float, gamma: float, x: float) -> float:
    """
    Dollar holding (mu - r) x / (gamma sigma^2).

    Raises:
        ParameterError: if sigma <= 0, gamma <= 0 or x <= 0
    """
    if not x > 0.0:
        raise ParameterError(f"wealth x must be > 0, got {x}", field="x")
    return merton_fraction(mu, r, sigma, gamma) * x


def merton_value(
    mu: float,
    r: float,
    sigma: float,
    gamma: float = 1.0,
    T: float = 1.0,
    x0: float = 1.0,
) -> float:
    """
    Expected terminal utility under the Merton policy.

    Log utility (gamma = 1): ln x0 + (r + (mu - r)^2 / (2 sigma^2)) T.
    CRRA: x0^(1-gamma)/(1-gamma) * exp((1-gamma)(r + (mu-r)^2/(2 gamma sigma^2)) T).
    """
    _check_market(sigma, gamma)
    if not x0 > 0.0:
        raise ParameterError(f"x0 must be > 0, got {x0}", field="x0")
    excess = mu - r
    if gamma == 1.0:
        return math.log(x0) + (r + excess * excess / (2.0 * sigma * sigma)) * T
    k = (1.0 - gamma) * (r + excess * excess / (2.0 * gamma * sigma * sigma))
    return x0 ** (1.0 - gamma) / (1.0 - gamma) * math.exp(k * T)


def merton_benchmark(
    mu: float,
    r: float,
    sigma: float,
    gamma: float = 1.0,
    T: float = 1.0,
    x0: float = 1.0,
) -> MertonBenchmark:
    """Bundle the closed-form Merton quantities for reports."""
    fraction = merton_fraction(mu, r, sigma, gamma)
    growth = r + (mu - r) ** 2 / (2.0 * gamma * sigma * sigma)
    reasoning = f"fraction={fraction:.4f}, gamma={gamma}"
    if abs(fraction) > 1.0:
        reasoning += " (leveraged)" if fraction > 0 else " (net short)"
    return MertonBenchmark(
        fraction=fraction,
        holding=fraction * x0,
        growth_rate=growth,
        expected_utility=merton_value(mu, r, sigma, gamma, T, x0),
        reasoning=reasoning,
    )


def brute_force_hjb_max(
    vx: float,
    vxx: float,
    mu: float,
    r: float,
    sigma: float,
    pi_grid: Grid1D,
) -> float:
    """
    Grid point maximising pi (mu - r) vx + 1/2 pi^2 sigma^2 vxx.

    Ties resolve to the first (smallest) grid point.

    Raises:
        ConcavityError: if vxx >= 0, so no interior maximum exists
    """
    if not vxx < 0.0:
        raise ConcavityError(f"vxx must be < 0 for an interior maximum, got {vxx}", vxx=vxx)
    if not sigma > 0.0:
        raise ParameterError(f"sigma must be > 0, got {sigma}", field="sigma")
    pis = pi_grid.nodes
    objective = pis * (mu - r) * vx + 0.5 * pis * pis * sigma * sigma * vxx
    return float(pis[int(np.argmax(objective))])
