"""
Monte-Carlo wealth simulation.

Euler-Maruyama on dX = (r X + (mu - r) pi) dt + pi sigma dW. Brownian
increments come from one counter-based Philox stream per path, keyed by
(seed, path index), so any split of the paths reproduces the same numbers.
"""
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np
import structlog

from ..analysis.metrics import mean_std_err
from ..core.errors import ParameterError
from ..core.models import Grid1D, MarketParams, MCEstimate, TiedLogExpansion2D
from ..expansion import d2_dx2
from .policies import ConstantPolicy, Policy


logger = structlog.get_logger()

WEALTH_FLOOR = 1e-12
UTILITY_CAP = 1e6
STEPS_PER_YEAR = 252


class Utility(str, Enum):
    LOG = "log"
    CAPPED_LOG = "capped_log"  # ln(min(x, cap)), bounded above
    CRRA = "crra"


def terminal_utility(x: np.ndarray, utility: Utility = Utility.LOG, gamma: float = 1.0,
                     cap: float = UTILITY_CAP) -> np.ndarray:
    """Utility of terminal wealth, evaluated at the bankruptcy floor where needed."""
    xs = np.maximum(np.asarray(x, dtype=float), WEALTH_FLOOR)
    if utility == Utility.LOG:
        return np.log(xs)
    if utility == Utility.CAPPED_LOG:
        return np.log(np.minimum(xs, cap))
    if not gamma > 0.0:
        raise ParameterError(f"gamma must be > 0, got {gamma}", field="gamma")
    if gamma == 1.0:
        return np.log(xs)
    return xs ** (1.0 - gamma) / (1.0 - gamma)


def default_steps(T: float) -> int:
    return max(1, int(round(STEPS_PER_YEAR * T)))


def _check_run(n_paths: int, n_steps: int, seed: int) -> None:
    if n_paths < 1:
        raise ParameterError(f"n_paths must be >= 1, got {n_paths}", field="n_paths")
    if n_steps < 1:
        raise ParameterError(f"n_steps must be >= 1, got {n_steps}", field="n_steps")
    if not 0 <= seed < 2 ** 64:
        raise ParameterError(f"seed must be in [0, 2^64), got {seed}", field="seed")


def path_stream(seed: int, path: int) -> np.random.Generator:
    """Independent generator for one path; the Philox key packs (seed, path)."""
    return np.random.Generator(np.random.Philox(key=(seed << 64) | path))


def brownian_increments(seed: int, n_paths: int, n_steps: int, dt: float) -> np.ndarray:
    """Increments dW of shape (n_paths, n_steps)."""
    scale = math.sqrt(dt)
    out = np.empty((n_paths, n_steps))
    for i in range(n_paths):
        out[i] = scale * path_stream(seed, i).standard_normal(n_steps)
    return out


def _simulate(
    m: MarketParams,
    p: Policy,
    dw: np.ndarray,
    seed: int,
    utility: Utility,
    gamma: float,
) -> MCEstimate:
    n_paths, n_steps = dw.shape
    dt = m.T / n_steps
    mu, r, sigma = m.coefficients(n_steps)

    x = np.full(n_paths, m.x0)
    alive = np.ones(n_paths, dtype=bool)
    violated = np.zeros(n_paths, dtype=bool)
    for j in range(n_steps):
        violated |= alive & ~p.admissible(x)
        pi = np.where(alive, p.holding(x, mu[j], r[j], sigma[j]), 0.0)
        step = (r[j] * x + (mu[j] - r[j]) * pi) * dt + pi * sigma[j] * dw[:, j]
        x = np.where(alive, x + step, x)
        broke = alive & (x <= WEALTH_FLOOR)
        # absorbed at the floor
        x[broke] = WEALTH_FLOOR
        alive &= ~broke

    mean, std_err = mean_std_err(terminal_utility(x, utility, gamma))
    estimate = MCEstimate(
        mean=mean,
        std_err=std_err,
        n_paths=n_paths,
        seed=seed,
        label=p.id,
        n_steps=n_steps,
        bankrupt_paths=int(np.count_nonzero(~alive)),
        domain_violations=int(np.count_nonzero(violated)),
        concavity_violation=p.concavity_violation,
    )
    logger.debug("portfolio.simulated", policy=p.id, mean=mean, std_err=std_err,
                 bankrupt=estimate.bankrupt_paths)
    return estimate


def simulate_wealth(
    m: MarketParams,
    p: Policy,
    n_paths: int,
    n_steps: Optional[int] = None,
    seed: int = 0,
    utility: Utility = Utility.LOG,
    gamma: float = 1.0,
) -> MCEstimate:
    """
    Monte-Carlo estimate of E[U(X_T)] under policy p.

    Paths that reach the floor 1e-12 are absorbed there, counted in
    bankrupt_paths and scored at U(1e-12).

    Args:
        m: market
        p: policy
        n_paths: number of paths
        n_steps: Euler steps; defaults to 252 per unit of T
        seed: stream key
        utility: log, capped_log or crra
        gamma: CRRA risk aversion
    """
    n_steps = default_steps(m.T) if n_steps is None else n_steps
    _check_run(n_paths, n_steps, seed)
    dw = brownian_increments(seed, n_paths, n_steps, m.T / n_steps)
    return _simulate(m, p, dw, seed, Utility(utility), gamma)


def policy_tournament(
    m: MarketParams,
    policies: Sequence[Policy],
    n_paths: int,
    n_steps: Optional[int] = None,
    seed: int = 0,
    utility: Utility = Utility.LOG,
    gamma: float = 1.0,
) -> list[MCEstimate]:
    """One estimate per policy, all driven by the same Brownian increments."""
    n_steps = default_steps(m.T) if n_steps is None else n_steps
    _check_run(n_paths, n_steps, seed)
    dw = brownian_increments(seed, n_paths, n_steps, m.T / n_steps)
    results = [_simulate(m, p, dw, seed, Utility(utility), gamma) for p in policies]
    logger.info("portfolio.tournament", policies=[e.label for e in results],
                means=[e.mean for e in results])
    return results


def constant_proportion_search(
    m: MarketParams,
    grid: Grid1D,
    n_paths: int,
    n_steps: Optional[int] = None,
    seed: int = 0,
) -> tuple[float, list[MCEstimate]]:
    """
    Best constant proportion on `grid` by common-random-number log utility.

    Returns:
        (best proportion, estimates in grid order); ties go to the smallest proportion
    """
    policies = [ConstantPolicy(float(f)) for f in grid.nodes]
    estimates = policy_tournament(m, policies, n_paths, n_steps, seed)
    best = int(np.argmax([e.mean for e in estimates]))
    return float(grid.nodes[best]), estimates


@dataclass(frozen=True)
class ConcavityAudit:
    """Sign of V_xx = a2/(x+a3) along the queried wealths."""
    a2_sign: int
    n_points: int
    sign_mismatches: int
    concave: bool  # V_xx < 0 everywhere

    @property
    def consistent(self) -> bool:
        return self.sign_mismatches == 0


def concavity_audit(e: TiedLogExpansion2D, xs: Sequence[float]) -> ConcavityAudit:
    """
    Check sign(d2_dx2) == sign(a2) on the wealths xs.

    Raises:
        LogDomainError: if some x + a3 <= 0
    """
    vxx = np.atleast_1d(np.asarray(d2_dx2(e, np.asarray(xs, dtype=float))))
    a2_sign = int(np.sign(e.a2))
    mismatches = int(np.count_nonzero(np.sign(vxx) != a2_sign))
    return ConcavityAudit(
        a2_sign=a2_sign,
        n_points=int(vxx.size),
        sign_mismatches=mismatches,
        concave=bool(np.all(vxx < 0.0)),
    )
