"""Portfolio model: policies, HJB residual and Monte-Carlo simulation."""
from .hjb import ansatz_optimal_pi, unsimplified_optimal_pi, hjb_residual, optimal_holding
from .policies import (
    Policy, ConstantPolicy, MertonPolicy, AnsatzPolicy,
    create_policy, create_all_policies, DEFAULT_POLICIES,
)
from .simulator import (
    Utility, terminal_utility, default_steps, path_stream, brownian_increments,
    simulate_wealth, policy_tournament, constant_proportion_search,
    ConcavityAudit, concavity_audit, WEALTH_FLOOR, UTILITY_CAP,
)

__all__ = [
    # HJB
    'ansatz_optimal_pi', 'unsimplified_optimal_pi', 'hjb_residual', 'optimal_holding',
    # Policies
    'Policy', 'ConstantPolicy', 'MertonPolicy', 'AnsatzPolicy',
    'create_policy', 'create_all_policies', 'DEFAULT_POLICIES',
    # Simulation
    'Utility', 'terminal_utility', 'default_steps', 'path_stream', 'brownian_increments',
    'simulate_wealth', 'policy_tournament', 'constant_proportion_search',
    'ConcavityAudit', 'concavity_audit', 'WEALTH_FLOOR', 'UTILITY_CAP',
]
