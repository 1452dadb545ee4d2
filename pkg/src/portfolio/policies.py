"""
Portfolio policies.
Every policy maps current wealth to a dollar holding in the risky asset.
"""
from abc import ABC, abstractmethod

import numpy as np
import structlog

from ..core.errors import ParameterError
from ..core.models import TiedLogExpansion2D
from .hjb import _check_degenerate, optimal_holding


logger = structlog.get_logger()


class Policy(ABC):
    """
    Base class for all portfolio policies.

    Policies define:
    - the dollar holding pi for a vector of wealths
    - which wealths the rule is defined for
    """

    def __init__(self, policy_id: str, name: str):
        self.id = policy_id
        self.name = name

    @abstractmethod
    def holding(self, x: np.ndarray, mu: float, r: float, sigma: float) -> np.ndarray:
        """
        Dollar amount held in the risky asset.

        Args:
            x: current wealth per path
            mu, r, sigma: market coefficients for the current step

        Returns:
            Holding per path; 0 where the rule is undefined
        """

    def admissible(self, x: np.ndarray) -> np.ndarray:
        """Mask of wealths where the rule is defined."""
        return np.ones(x.shape, dtype=bool)

    @property
    def concavity_violation(self) -> bool:
        return False

    def __repr__(self) -> str:
        return f"Policy({self.id})"


class ConstantPolicy(Policy):
    """Constant proportion `pi` of current wealth."""

    def __init__(self, pi: float, policy_id: str = ""):
        super().__init__(policy_id or f"constant_{pi:g}", f"Constant {pi:g}")
        self.pi = pi

    def holding(self, x, mu, r, sigma):
        return self.pi * x


class MertonPolicy(Policy):
    """(mu - r) x / (gamma sigma^2) dollars."""

    def __init__(self, gamma: float = 1.0, policy_id: str = ""):
        if not gamma > 0.0:
            raise ParameterError(f"gamma must be > 0, got {gamma}", field="gamma")
        super().__init__(policy_id or f"merton_{gamma:g}", f"Merton gamma={gamma:g}")
        self.gamma = gamma

    def holding(self, x, mu, r, sigma):
        return (mu - r) * x / (self.gamma * sigma * sigma)


class AnsatzPolicy(Policy):
    """
    Holding from the tied ansatz first-order condition.

    Where x + a3 <= 0 the rule is undefined: the holding is 0 and the
    simulator records a domain violation for that path.
    """

    def __init__(self, e: TiedLogExpansion2D, policy_id: str = ""):
        _check_degenerate(e)
        super().__init__(
            policy_id or f"ansatz_{e.a1:g}_{e.a2:g}_{e.a3:g}",
            f"Ansatz a=({e.a1:g}, {e.a2:g}, {e.a3:g})",
        )
        self.e = e
        if e.a2 > 0.0:
            logger.warning("portfolio.convex_ansatz", policy=self.id, a2=e.a2)

    def admissible(self, x):
        return x + self.e.a3 > 0.0

    def holding(self, x, mu, r, sigma):
        ok = self.admissible(x)
        out = np.zeros_like(x)
        if np.any(ok):
            out[ok] = optimal_holding(self.e, mu, r, sigma, x[ok])
        return out

    @property
    def concavity_violation(self) -> bool:
        # V_xx = a2/(x+a3) > 0: the first-order condition is a minimum
        return self.e.a2 > 0.0


def create_policy(config: dict) -> Policy:
    """
    Factory function to create a policy from config.

    Args:
        config: dict with "type" in {constant, merton, ansatz} and its parameters
            (pi | gamma | a1, a2, a3), optional "id"

    Returns:
        Configured policy instance
    """
    kind = config.get("type")
    policy_id = config.get("id", "")
    if kind == "constant":
        return ConstantPolicy(float(config.get("pi", 0.0)), policy_id)
    if kind == "merton":
        return MertonPolicy(float(config.get("gamma", 1.0)), policy_id)
    if kind == "ansatz":
        e = TiedLogExpansion2D(
            a1=float(config.get("a1", 0.0)),
            a2=float(config.get("a2", -1.0)),
            a3=float(config.get("a3", 0.0)),
        )
        return AnsatzPolicy(e, policy_id)
    raise ParameterError(f"unknown policy type: {kind!r}", field="type")


def create_all_policies(configs: list[dict]) -> list[Policy]:
    """Create all enabled policies from a list of configs."""
    return [
        create_policy(config)
        for config in configs
        if config.get("enabled", True)
    ]


# Benchmark line-up for the tournament
DEFAULT_POLICIES = [
    {"id": "merton", "type": "merton", "gamma": 1.0},
    {"id": "riskless", "type": "constant", "pi": 0.0},
    {"id": "ansatz", "type": "ansatz", "a1": 0.0, "a2": -1.0, "a3": 0.0},
]
