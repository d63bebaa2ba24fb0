"""Pursuit-and-search solvers built on the logarithmic interception spiral."""

__version__ = "0.1.0"

from .assignment import (
    Assignment,
    EfficiencyMatrix,
    InterceptorSpec,
    TargetSpec,
    balance,
    build_efficiency_matrix,
    hungarian,
    verify_duals,
)
from .errors import DomainError, InfeasibleError, PursuitError, SizeError, SolverError
from .game import (
    GameSolution,
    PayoffMatrix,
    brown_robinson,
    build_payoff_matrix,
    exact_value_support_enumeration,
    pure_saddle,
)
from .kinematics import (
    EvaderStrategy,
    PursuitEvent,
    PursuitScenario,
    TrajectorySample,
    check_duration_matrix,
    guaranteed_capture_time,
    known_target_interception_time,
    phase_one_time,
    positions_at,
    realignment_time,
    sample_trajectory,
    spiral_time_to_angle,
)
from .ordering import (
    CheckCostMatrix,
    CheckOrder,
    branch_and_bound,
    brute_force_order,
    held_karp,
    order_from_scenario,
    reduce_matrix,
)
from .scheduling import Job, Schedule, evaluate_criteria, optimal_order, wspt_order
from .stopping import StoppingPolicy, g, h, optimal_threshold, simulate
